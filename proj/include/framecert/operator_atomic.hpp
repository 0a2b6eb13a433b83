#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "framecert/frames.hpp"

namespace framecert {

// Certificate for the operator-frame inequality
//   A ||L* x||^2 <= sum |<x, f_n>|^2 <= B ||x||^2.
// lower_A is the optimal constant; it is absent when the range condition
// fails (no positive A exists) and absent-with-`lower_vacuous` when the
// inequality constrains nothing measurable: L = 0, or L so small relative to
// the family that the optimal constant exceeds double range. Certificates
// must stay finite to serialize.
struct LFrameCertificate {
  std::optional<double> lower_A;
  bool lower_vacuous = false;
  double upper_B = 0.0;
  double coeff_norm_C = 0.0;  // operator norm of the minimal coefficient map
  bool range_condition_ok = false;
  std::vector<LabeledValue> residuals;
  Tolerances tolerances;
  Vector lower_witness;  // unit vector attaining lower_A; empty when absent
};

inline bool lframe_passes(const LFrameCertificate& cert) {
  if (!cert.range_condition_ok) return false;
  if (cert.lower_vacuous) return true;
  return cert.lower_A.has_value() && *cert.lower_A > cert.tolerances.bound_slack;
}

// The existence construction: {L e_n} over the standard basis. For this
// family sum |<x, L e_n>|^2 = ||L* x||^2 exactly, so the certificate comes
// out with lower_A = 1 and upper_B = sigma_max(L)^2 whenever L != 0.
inline FrameFamily build_atomic_system(const Matrix& op) {
  require_square(op, "build_atomic_system");
  require_finite(op, "build_atomic_system");
  return FrameFamily(op);
}

inline LFrameCertificate lframe_bounds(const FrameFamily& family, const Matrix& op,
                                       const Tolerances& tol = {}) {
  if (op.rows() != family.dim() || op.cols() != family.dim())
    throw DimensionMismatchError("lframe_bounds: operator dimension != family dimension");
  const auto spec = detail::spectral_certificate(family.synthesis_matrix(), op, tol);
  LFrameCertificate cert;
  cert.lower_A = spec.lower;
  cert.lower_vacuous = spec.vacuous;
  cert.upper_B = spec.upper;
  cert.coeff_norm_C = spec.coeff_norm;
  cert.range_condition_ok = spec.range_ok;
  cert.tolerances = tol;
  cert.lower_witness = spec.witness;
  cert.residuals = {
      {"range_residual", spec.range_residual},
      {"synthesis_residual", spec.synthesis_residual},
      {"rank", static_cast<double>(spec.rank)},
      {"rank_cutoff_rel", spec.cutoff_rel},
      {"sigma_max_T", spec.sigma_max_T},
      {"sigma_max_L", spec.sigma_max_op},
  };
  return cert;
}

// Atoms {f_n} together with duals {g_n} realizing Lx = sum <x, g_n> f_n.
struct DualPair {
  FrameFamily atoms;
  FrameFamily duals;

  DualPair(FrameFamily a, FrameFamily g) : atoms(std::move(a)), duals(std::move(g)) {
    if (atoms.dim() != duals.dim() || atoms.size() != duals.size())
      throw DimensionMismatchError("DualPair: atoms and duals must match in shape");
  }
};

namespace detail {

struct PinvDual {
  Matrix coefficient_map;    // Theta_g = pinv(T) L, N x d
  double synthesis_residual; // ||T Theta_g - L|| / ||L||
  double coeff_norm;
};

inline PinvDual make_pinv_dual(const FrameFamily& family, const Matrix& op,
                               const Tolerances& tol) {
  if (op.rows() != family.dim() || op.cols() != family.dim())
    throw DimensionMismatchError("minimal_bessel_dual: operator dimension != family dimension");
  require_finite(op, "minimal_bessel_dual");
  const Matrix& t = family.synthesis_matrix();
  const Matrix theta = pinv(t, tol) * op;
  const double scale = spectral_norm(op);
  const double residual = spectral_norm(t * theta - op) / (scale > 0.0 ? scale : 1.0);
  return {theta, residual, spectral_norm(theta)};
}

inline Vector random_unit_vector(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(d);
  for (Index i = 0; i < d; ++i) x(i) = Complex(normal(rng), normal(rng));
  const double n = x.norm();
  return n > 0.0 ? Vector(x / n) : x;
}

}  // namespace detail

// The minimal-operator-norm coefficient map Theta_g = pinv(T) L; its adjoint
// applied to the standard basis yields the dual vectors g_n. Among all valid
// coefficient maps this one has the smallest C in ||a_x|| <= C ||x||.
inline DualPair minimal_bessel_dual(const FrameFamily& family, const Matrix& op,
                                    const Tolerances& tol = {}) {
  const auto dual = detail::make_pinv_dual(family, op, tol);
  if (dual.synthesis_residual > tol.residual_tol)
    throw NotAtomicForLError("minimal_bessel_dual: range condition fails, residual " +
                             std::to_string(dual.synthesis_residual));
  return DualPair(family, FrameFamily(dual.coefficient_map.adjoint()));
}

// Residuals of the adjoint expansion L* x = sum <x, f_n> g_n, both as the
// matrix identity ||G T_f* - L*|| and as a max over sampled unit vectors.
inline std::vector<LabeledValue> adjoint_expansion_check(const DualPair& pair, const Matrix& op,
                                                         int n_samples = 32,
                                                         std::uint64_t seed = 0x5eedfacecafe01ULL) {
  if (op.rows() != pair.atoms.dim() || op.cols() != pair.atoms.dim())
    throw DimensionMismatchError("adjoint_expansion_check: operator dimension mismatch");
  require_finite(op, "adjoint_expansion_check");
  const Matrix& f = pair.atoms.synthesis_matrix();
  const Matrix& g = pair.duals.synthesis_matrix();
  const Matrix defect = g * f.adjoint() - op.adjoint();
  const double scale = spectral_norm(op);
  const double denom = scale > 0.0 ? scale : 1.0;

  std::mt19937_64 rng(seed);
  double sampled = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const Vector x = detail::random_unit_vector(pair.atoms.dim(), rng);
    sampled = std::max(sampled, (defect * x).norm());
  }
  return {
      {"matrix_identity_rel", spectral_norm(defect) / denom},
      {"sampled_max_rel", sampled / denom},
  };
}

// Minimal coefficients a_x with Lx = sum a_n f_n; a_x = pinv(T) L x.
inline Vector atomic_coefficients(const FrameFamily& family, const Matrix& op, const Vector& x,
                                  const Tolerances& tol = {}) {
  if (x.size() != family.dim())
    throw DimensionMismatchError("atomic_coefficients: vector length != family dimension");
  require_finite(x, "atomic_coefficients");
  const auto dual = detail::make_pinv_dual(family, op, tol);
  const Vector coeffs = dual.coefficient_map * x;
  const Vector target = op * x;
  const double scale = spectral_norm(op) * x.norm();
  if ((family.synthesis_matrix() * coeffs - target).norm() > tol.residual_tol * (scale > 0.0 ? scale : 1.0))
    throw NotAtomicForLError("atomic_coefficients: Lx is not reproduced by the family");
  return coeffs;
}

// Joint audit of the equivalent characterizations of an atomic system:
//  (ii)  the two-sided bound with the certified constants, spot-checked on
//        sampled unit vectors,
//  (iii) existence of a Bessel dual with small synthesis residual,
//  (iv)  the adjoint expansion residual,
// plus the quantitative link lower_A * C^2 >= 1 carried by the minimal dual.
// The three characterizations pass or fail together; `coherent` records that.
struct EquivalenceReport {
  LFrameCertificate certificate;
  bool pass_ii = false;
  bool pass_iii = false;
  bool pass_iv = false;
  bool quantitative_ok = false;  // vacuously true when not applicable
  bool coherent = false;
  bool all_pass = false;
  double synthesis_residual = 0.0;
  double adjoint_residual = 0.0;
  double sampled_lower_violation = 0.0;
  double sampled_upper_violation = 0.0;
  int samples = 0;
};

inline EquivalenceReport verify_atomic_equivalence(const FrameFamily& family, const Matrix& op,
                                                   int n_samples = 100, const Tolerances& tol = {},
                                                   std::uint64_t seed = 0x5eedfacecafe02ULL) {
  EquivalenceReport report;
  report.samples = n_samples;
  report.certificate = lframe_bounds(family, op, tol);
  const auto& cert = report.certificate;

  std::mt19937_64 rng(seed);
  for (int k = 0; k < n_samples; ++k) {
    const Vector x = detail::random_unit_vector(family.dim(), rng);
    const double sum_sq = analysis(family, x).squaredNorm();
    if (cert.lower_A)
      report.sampled_lower_violation = std::max(
          report.sampled_lower_violation, *cert.lower_A * (op.adjoint() * x).squaredNorm() - sum_sq);
    report.sampled_upper_violation =
        std::max(report.sampled_upper_violation, sum_sq - cert.upper_B);
  }
  report.pass_ii = cert.range_condition_ok &&
                   report.sampled_lower_violation <= tol.bound_slack &&
                   report.sampled_upper_violation <= tol.bound_slack;

  const auto dual = detail::make_pinv_dual(family, op, tol);
  report.synthesis_residual = dual.synthesis_residual;
  report.pass_iii = dual.synthesis_residual <= tol.residual_tol;

  const DualPair pair(family, FrameFamily(dual.coefficient_map.adjoint()));
  const auto adjoint = adjoint_expansion_check(pair, op, n_samples, seed);
  report.adjoint_residual = adjoint.front().value;
  report.pass_iv = report.adjoint_residual <= tol.residual_tol;

  if (cert.lower_vacuous || !cert.lower_A) {
    report.quantitative_ok = true;  // nothing to compare
  } else {
    report.quantitative_ok =
        *cert.lower_A * cert.coeff_norm_C * cert.coeff_norm_C >= 1.0 - tol.bound_slack;
  }

  report.coherent = (report.pass_ii == report.pass_iii) && (report.pass_iii == report.pass_iv);
  report.all_pass = report.pass_ii && report.pass_iii && report.pass_iv && report.quantitative_ok;
  return report;
}

}  // namespace framecert
