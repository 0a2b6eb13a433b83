#pragma once

#include "framecert/numeric.hpp"

namespace framecert::detail {

// Shared engine behind frame and operator-frame certificates.
//
// T is the d x N synthesis matrix of a family, `op` a d x d operator. With
// S = T T* and M = op op* this computes
//
//   upper    = sigma_max(T)^2, the optimal Bessel constant,
//   lower    = the largest a with  a <M x, x> <= <S x, x>  for all x,
//   range_ok = ker(T*) contained in ker(op*), equivalently
//              range(op) contained in range(T).
//
// When range_ok holds, both quadratic forms vanish together on ker(T*), so
// the lower bound reduces to the pencil on range(T) where S is positive
// definite: with T = U Sigma V*, rank r kept columns Q = U_r, D = Sigma_r^2,
//
//   lower = 1 / sigma_max(D^{-1/2} Q* op)^2,
//
// attained at the witness x = Q D^{-1/2} v for the top left singular vector
// v of the reduced matrix. op == 0 makes the lower inequality empty; the
// certificate then reports `vacuous` instead of a number.
struct SpectralCertificate {
  std::optional<double> lower;
  bool vacuous = false;
  double upper = 0.0;
  double coeff_norm = 0.0;  // sigma_max(pinv(T) * op), the minimal coefficient map
  bool range_ok = false;
  double range_residual = 0.0;      // sigma_max(op* U_0) / sigma_max(op)
  double synthesis_residual = 0.0;  // ||T pinv(T) op - op|| / ||op||
  Index rank = 0;
  double sigma_max_T = 0.0;
  double sigma_max_op = 0.0;
  double cutoff_rel = 0.0;
  Vector witness;  // unit vector attaining `lower`; empty when absent
};

inline SpectralCertificate spectral_certificate(const Matrix& t, const Matrix& op,
                                                const Tolerances& tol) {
  require_finite(t, "spectral_certificate");
  require_finite(op, "spectral_certificate");
  require_square(op, "spectral_certificate");
  if (op.rows() != t.rows())
    throw DimensionMismatchError("spectral_certificate: operator/family dimensions differ");

  SpectralCertificate cert;
  const Index d = t.rows();

  const Svd tf = svd(t);
  cert.sigma_max_T = tf.singular_values(0);
  cert.upper = cert.sigma_max_T * cert.sigma_max_T;
  cert.cutoff_rel = tol.rank_cutoff(t.rows(), t.cols());
  const double cutoff_abs = cert.cutoff_rel * cert.sigma_max_T;

  Index rank = 0;
  while (rank < tf.singular_values.size() && tf.singular_values(rank) > cutoff_abs) ++rank;
  cert.rank = rank;

  cert.sigma_max_op = spectral_norm(op);
  cert.vacuous = cert.sigma_max_op == 0.0;

  if (!cert.vacuous && rank < d) {
    const Matrix null_basis = tf.u.rightCols(d - rank);
    cert.range_residual = spectral_norm(op.adjoint() * null_basis) / cert.sigma_max_op;
  }
  cert.range_ok = cert.vacuous || cert.range_residual <= tol.residual_tol;

  if (!cert.vacuous && cert.range_ok && rank > 0) {
    Matrix reduced = tf.u.leftCols(rank).adjoint() * op;  // rank x d
    for (Index i = 0; i < rank; ++i) reduced.row(i) /= tf.singular_values(i);
    const Svd rf = svd(reduced);
    const double top = rf.singular_values(0);
    const double lower = top > 0.0 ? 1.0 / (top * top) : 0.0;
    if (top > 0.0 && std::isfinite(lower)) {
      cert.lower = lower;
      Vector scaled = rf.u.col(0);
      for (Index i = 0; i < rank; ++i) scaled(i) /= tf.singular_values(i);
      Vector witness = tf.u.leftCols(rank) * scaled;
      cert.witness = witness / witness.norm();
    } else {
      // The optimal constant overflows double precision (the operator's scale
      // is subnormal relative to the family): the inequality constrains
      // nothing measurable, which is the vacuous case at working precision.
      cert.vacuous = true;
    }
  }

  // Minimal-norm coefficient map and its reproduction residual. The residual
  // equals the range residual in exact arithmetic; both are recorded because
  // they are computed along different routes.
  const Matrix theta = pinv_from(tf, t.rows(), t.cols(), cutoff_abs) * op;  // N x d
  cert.coeff_norm = spectral_norm(theta);
  const double denom = cert.sigma_max_op > 0.0 ? cert.sigma_max_op : 1.0;
  cert.synthesis_residual = spectral_norm(t * theta - op) / denom;

  return cert;
}

}  // namespace framecert::detail
