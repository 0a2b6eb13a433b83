#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "framecert/kernels.hpp"
#include "framecert/operator_atomic.hpp"

namespace framecert {

// Pairwise-distinct sample points; distinctness is an exact-equality check,
// near-duplicates are legal and merely degrade conditioning (which the
// certificate then shows).
class PointSet {
 public:
  explicit PointSet(std::vector<Complex> points) : points_(std::move(points)) {
    if (points_.empty()) throw DimensionMismatchError("PointSet: need at least one point");
    for (const auto& p : points_) {
      if (!(std::isfinite(p.real()) && std::isfinite(p.imag())))
        throw NonFiniteError("PointSet: non-finite point");
    }
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i] == points_[j])
          throw InvalidArgumentError("PointSet: points must be pairwise distinct");
  }

  std::size_t size() const { return points_.size(); }
  Complex operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Complex>& points() const { return points_; }

 private:
  std::vector<Complex> points_;
};

// Rings r_j = 1 - s^j, j = 1..rings, with per_ring equispaced angles each.
inline PointSet disk_exponential_lattice(double s, int rings, int per_ring) {
  if (!(s > 0.0 && s < 1.0)) throw InvalidArgumentError("disk_exponential_lattice: s must lie in (0, 1)");
  if (rings < 1 || per_ring < 1)
    throw InvalidArgumentError("disk_exponential_lattice: rings and per_ring must be >= 1");
  std::vector<Complex> points;
  points.reserve(static_cast<std::size_t>(rings) * static_cast<std::size_t>(per_ring));
  double power = 1.0;
  for (int j = 1; j <= rings; ++j) {
    power *= s;
    const double r = 1.0 - power;
    for (int k = 0; k < per_ring; ++k) {
      const double angle = 2.0 * M_PI * k / per_ring;
      points.emplace_back(r * std::cos(angle), r * std::sin(angle));
    }
  }
  return PointSet(std::move(points));
}

// Square lattice {a + i b : a, b = -half_extent, ..., half_extent} with the
// given spacing, for Fock-space experiments.
inline PointSet square_lattice(double spacing, double half_extent) {
  if (!(spacing > 0.0) || !(half_extent >= 0.0))
    throw InvalidArgumentError("square_lattice: need spacing > 0 and half_extent >= 0");
  const int steps = static_cast<int>(std::llround(2.0 * half_extent / spacing));
  std::vector<Complex> points;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j)
      points.emplace_back(-half_extent + i * spacing, -half_extent + j * spacing);
  return PointSet(std::move(points));
}

// Degree-N orthonormal monomial model of the space: e_k(z) = z^k / rho_k with
// rho_k^2 the squared norm of z^k. Closed forms for Bergman and Fock, radial
// quadrature for weighted Bergman.
struct TruncatedBasis {
  KernelSpec spec;
  int degree = 0;
  std::vector<double> norm_constants;  // rho_k, k = 0..degree
};

namespace detail {

// 2 int_0^1 r^{2k+1} omega(r) dr, with the substitution r = 1 - t^2 so that
// integrable boundary singularities of the weight converge under the gate.
inline double weighted_monomial_norm_sq(const WeightFunction& weight, int k, int resolution) {
  const auto evaluate = [&](int n) {
    const auto rule = gauss_legendre(n, 0.0, 1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = rule.nodes[i];
      const double r = 1.0 - t * t;
      sum += rule.weights[i] * 2.0 * std::pow(r, 2 * k + 1) * weight(r) * 2.0 * t;
    }
    return sum;
  };
  return convergence_gate(evaluate(resolution), evaluate(2 * resolution), "build_basis");
}

}  // namespace detail

inline TruncatedBasis build_basis(const KernelSpec& spec, int degree, int quad_resolution = 128) {
  validate(spec);
  if (degree < 0) throw InvalidArgumentError("build_basis: degree must be >= 0");
  TruncatedBasis basis{spec, degree, {}};
  basis.norm_constants.reserve(static_cast<std::size_t>(degree) + 1);
  if (const auto* b = std::get_if<BergmanKernel>(&spec)) {
    // rho_k^2 = k! Gamma(2 + eta) / Gamma(k + 2 + eta)
    for (int k = 0; k <= degree; ++k)
      basis.norm_constants.push_back(std::sqrt(std::exp(
          std::lgamma(k + 1.0) + std::lgamma(2.0 + b->eta) - std::lgamma(k + 2.0 + b->eta))));
  } else if (const auto* f = std::get_if<FockKernel>(&spec)) {
    // rho_k^2 = k! / alpha^k
    for (int k = 0; k <= degree; ++k)
      basis.norm_constants.push_back(
          std::sqrt(std::exp(std::lgamma(k + 1.0) - k * std::log(f->alpha))));
  } else {
    const auto& w = std::get<WeightedBergmanKernel>(spec);
    // rho_k^2 = 2 int_0^1 r^{2k+1} omega(r) dr
    for (int k = 0; k <= degree; ++k)
      basis.norm_constants.push_back(
          std::sqrt(detail::weighted_monomial_norm_sq(w.weight, k, quad_resolution)));
  }
  return basis;
}

namespace detail {

inline void require_point_in_domain(const KernelSpec& spec, Complex lambda, const char* who) {
  if (std::holds_alternative<FockKernel>(spec))
    require_finite_point(lambda, who);
  else
    require_in_disk(lambda, who);
}

}  // namespace detail

// Coordinates of K_lambda in the truncated basis: conj(lambda)^k / rho_k.
// For any polynomial f of degree <= N with coordinates c, inner(c, coords)
// recovers f(lambda) exactly.
inline Vector kernel_coordinates(const TruncatedBasis& basis, Complex lambda) {
  detail::require_point_in_domain(basis.spec, lambda, "kernel_coordinates");
  Vector coords(basis.degree + 1);
  Complex power(1.0, 0.0);
  for (int k = 0; k <= basis.degree; ++k) {
    coords(k) = power / basis.norm_constants[static_cast<std::size_t>(k)];
    power *= std::conj(lambda);
  }
  return coords;
}

// Norm of K_lambda within the degree-N model; increases to the closed-form
// norm as N grows.
inline double truncated_kernel_norm(const TruncatedBasis& basis, Complex lambda) {
  return kernel_coordinates(basis, lambda).norm();
}

enum class NormMode {
  truncated,    // divide by the model norm: exactly unit vectors in the model
  closed_form,  // divide by the closed-form / estimated norm of the full space
};

// The family {K_{lambda_n} / ||K_{lambda_n}||} realized in the truncated
// model. In closed_form mode the weighted-Bergman division by the estimate
// (int omega)^{ -1/2 } turns into the (int omega)^{1/2} scaling of the atoms.
inline FrameFamily normalized_kernel_family(const TruncatedBasis& basis, const PointSet& points,
                                            NormMode mode = NormMode::truncated,
                                            int resolution = 64) {
  Matrix vectors(basis.degree + 1, static_cast<Index>(points.size()));
  for (std::size_t n = 0; n < points.size(); ++n) {
    const Vector coords = kernel_coordinates(basis, points[n]);
    const double norm =
        mode == NormMode::truncated ? coords.norm() : kernel_norm(basis.spec, points[n], resolution);
    vectors.col(static_cast<Index>(n)) = coords / norm;
  }
  return FrameFamily(std::move(vectors));
}

// Certificate for the sampling inequality
//   A ||L* f||^2 <= sum |f(lambda_n)|^2 / ||K_{lambda_n}||^2 <= B ||f||^2
// on the degree-N model, where the middle sum is literally the analysis
// energy of the normalized kernel family. All numbers certify the truncation
// only; the per-point diagnostics say how faithful that truncation is.
struct SamplingAudit {
  LFrameCertificate certificate;
  int truncation_degree = 0;
  std::vector<double> truncation_diagnostics;  // in (0, 1], one per point
  bool estimate_flag = false;                  // norms known only up to equivalence
};

inline SamplingAudit sampling_audit(const TruncatedBasis& basis, const PointSet& points,
                                    const Matrix& op, NormMode mode = NormMode::truncated,
                                    const Tolerances& tol = {}, int resolution = 64) {
  const FrameFamily family = normalized_kernel_family(basis, points, mode, resolution);
  SamplingAudit audit;
  audit.certificate = lframe_bounds(family, op, tol);
  audit.truncation_degree = basis.degree;
  audit.estimate_flag = kernel_norm_is_estimate(basis.spec);

  audit.truncation_diagnostics.reserve(points.size());
  if (audit.estimate_flag) {
    // No closed form to compare against: report self-convergence, the ratio
    // of the degree-N norm to the degree-2N norm.
    const TruncatedBasis doubled = build_basis(basis.spec, 2 * basis.degree, 2 * resolution);
    for (std::size_t n = 0; n < points.size(); ++n)
      audit.truncation_diagnostics.push_back(truncated_kernel_norm(basis, points[n]) /
                                             truncated_kernel_norm(doubled, points[n]));
  } else {
    for (std::size_t n = 0; n < points.size(); ++n)
      audit.truncation_diagnostics.push_back(truncated_kernel_norm(basis, points[n]) /
                                             kernel_norm(basis.spec, points[n], resolution));
  }
  return audit;
}

inline SamplingAudit sampling_audit(const TruncatedBasis& basis, const PointSet& points,
                                    NormMode mode = NormMode::truncated, const Tolerances& tol = {},
                                    int resolution = 64) {
  return sampling_audit(basis, points, Matrix::Identity(basis.degree + 1, basis.degree + 1), mode,
                        tol, resolution);
}

struct SampleReconstruction {
  Vector coefficients;
  Vector reconstruction;
  double relative_error = 0.0;  // against L f in coordinates
};

// Atomic reconstruction of L f from the normalized kernel family: minimal
// coefficients a_f with L f = sum a_n k_{lambda_n} in the model space.
inline SampleReconstruction operator_sample_reconstruct(const TruncatedBasis& basis,
                                                        const PointSet& points, const Matrix& op,
                                                        const Vector& f_coords,
                                                        NormMode mode = NormMode::truncated,
                                                        const Tolerances& tol = {},
                                                        int resolution = 64) {
  const FrameFamily family = normalized_kernel_family(basis, points, mode, resolution);
  SampleReconstruction result;
  result.coefficients = atomic_coefficients(family, op, f_coords, tol);
  result.reconstruction = synthesis(family, result.coefficients);
  const Vector target = op * f_coords;
  const double scale = target.norm();
  result.relative_error = (result.reconstruction - target).norm() / (scale > 0.0 ? scale : 1.0);
  return result;
}

// Adjoint expansion L* f = sum (f(lambda_n) / ||K_{lambda_n}||) g_n driven by
// point samples of f: evaluate, scale by the reciprocal kernel norms, and
// synthesize against the minimal Bessel duals.
inline Vector adjoint_sample_expansion(const TruncatedBasis& basis, const PointSet& points,
                                       const Matrix& op, const Vector& f_coords,
                                       NormMode mode = NormMode::truncated,
                                       const Tolerances& tol = {}, int resolution = 64) {
  if (f_coords.size() != basis.degree + 1)
    throw DimensionMismatchError("adjoint_sample_expansion: coordinate length != degree + 1");
  const FrameFamily family = normalized_kernel_family(basis, points, mode, resolution);
  const DualPair pair = minimal_bessel_dual(family, op, tol);

  Vector scaled_samples(static_cast<Index>(points.size()));
  for (std::size_t n = 0; n < points.size(); ++n) {
    const Complex value = inner(f_coords, kernel_coordinates(basis, points[n]));
    const double norm = mode == NormMode::truncated
                            ? truncated_kernel_norm(basis, points[n])
                            : kernel_norm(basis.spec, points[n], resolution);
    scaled_samples(static_cast<Index>(n)) = value / norm;
  }
  return synthesis(pair.duals, scaled_samples);
}

}  // namespace framecert
