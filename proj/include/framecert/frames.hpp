#pragma once

#include <utility>
#include <vector>

#include "framecert/detail/spectral.hpp"
#include "framecert/numeric.hpp"

namespace framecert {

// Ordered finite family {f_n} in C^d, stored as the columns of its synthesis
// matrix. Zero vectors are legal members and the family need not span: a
// Bessel sequence has no lower bound to defend.
class FrameFamily {
 public:
  explicit FrameFamily(Matrix vectors) : vectors_(std::move(vectors)) {
    if (vectors_.rows() == 0 || vectors_.cols() == 0)
      throw DimensionMismatchError("FrameFamily: need at least one vector in C^d, d >= 1");
    require_finite(vectors_, "FrameFamily");
  }

  static FrameFamily from_vectors(const std::vector<Vector>& vecs) {
    if (vecs.empty()) throw DimensionMismatchError("FrameFamily: empty family");
    Matrix m(vecs.front().size(), static_cast<Index>(vecs.size()));
    for (Index n = 0; n < m.cols(); ++n) {
      if (vecs[static_cast<std::size_t>(n)].size() != m.rows())
        throw DimensionMismatchError("FrameFamily: vectors of mixed length");
      m.col(n) = vecs[static_cast<std::size_t>(n)];
    }
    return FrameFamily(std::move(m));
  }

  Index dim() const { return vectors_.rows(); }
  Index size() const { return vectors_.cols(); }
  Vector vector(Index n) const { return vectors_.col(n); }
  const Matrix& synthesis_matrix() const { return vectors_; }

 private:
  Matrix vectors_;
};

struct BoundCertificate {
  std::optional<double> lower_A;  // absent when the family does not span
  double upper_B = 0.0;
  bool is_frame = false;
  std::vector<LabeledValue> residuals;
  Tolerances tolerances;
};

// Coefficients <x, f_n> of the analysis operator.
inline Vector analysis(const FrameFamily& family, const Vector& x) {
  if (x.size() != family.dim())
    throw DimensionMismatchError("analysis: vector length != family dimension");
  require_finite(x, "analysis");
  return family.synthesis_matrix().adjoint() * x;
}

// Sum c_n f_n of the synthesis operator.
inline Vector synthesis(const FrameFamily& family, const Vector& coeffs) {
  if (coeffs.size() != family.size())
    throw DimensionMismatchError("synthesis: coefficient count != family size");
  require_finite(coeffs, "synthesis");
  return family.synthesis_matrix() * coeffs;
}

// S = T T*, Hermitian positive semidefinite.
inline Matrix frame_operator(const FrameFamily& family) {
  const Matrix& t = family.synthesis_matrix();
  return t * t.adjoint();
}

// Optimal constants of the frame inequality: the spectral extremes of S.
// lower_A is reported only when the family spans up to the rank cutoff;
// is_frame additionally requires lower_A to clear bound_slack.
inline BoundCertificate frame_bounds(const FrameFamily& family, const Tolerances& tol = {}) {
  const Index d = family.dim();
  const auto spec = detail::spectral_certificate(
      family.synthesis_matrix(), Matrix::Identity(d, d), tol);
  BoundCertificate cert;
  cert.lower_A = spec.lower;
  cert.upper_B = spec.upper;
  cert.is_frame = spec.lower.has_value() && *spec.lower > tol.bound_slack;
  cert.tolerances = tol;
  cert.residuals = {
      {"lambda_min", spec.lower.value_or(0.0)},
      {"range_residual", spec.range_residual},
      {"rank", static_cast<double>(spec.rank)},
      {"rank_cutoff_rel", spec.cutoff_rel},
  };
  return cert;
}

// Optimal Bessel constant sigma_max(T)^2; defined for every family.
inline double bessel_bound(const FrameFamily& family) {
  const double s = spectral_norm(family.synthesis_matrix());
  return s * s;
}

namespace detail {

inline Matrix frame_operator_inverse(const FrameFamily& family, const Tolerances& tol,
                                     const char* who) {
  const auto bounds = frame_bounds(family, tol);
  if (!bounds.is_frame)
    throw NotAFrameError(std::string(who) + ": lower frame bound does not clear bound_slack");
  const auto eig = hermitian_eig(frame_operator(family), tol);
  Matrix inv = Matrix::Zero(family.dim(), family.dim());
  for (Index i = 0; i < eig.eigenvalues.size(); ++i)
    inv.noalias() +=
        (1.0 / eig.eigenvalues(i)) * eig.eigenvectors.col(i) * eig.eigenvectors.col(i).adjoint();
  return inv;
}

}  // namespace detail

// Canonical dual family {S^{-1} f_n}; requires a frame.
inline FrameFamily canonical_dual(const FrameFamily& family, const Tolerances& tol = {}) {
  const Matrix inv = detail::frame_operator_inverse(family, tol, "canonical_dual");
  return FrameFamily(inv * family.synthesis_matrix());
}

// Reconstruction x = sum <x, f_n> S^{-1} f_n. The swapped expansion
// sum <x, S^{-1} f_n> f_n agrees to the same tolerance and is left to the
// caller to form from canonical_dual when wanted.
inline Vector reconstruct(const FrameFamily& family, const Vector& x, const Tolerances& tol = {}) {
  if (x.size() != family.dim())
    throw DimensionMismatchError("reconstruct: vector length != family dimension");
  require_finite(x, "reconstruct");
  const Matrix inv = detail::frame_operator_inverse(family, tol, "reconstruct");
  return inv * (family.synthesis_matrix() * (family.synthesis_matrix().adjoint() * x));
}

}  // namespace framecert
