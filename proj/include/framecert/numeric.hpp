#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "framecert/errors.hpp"

namespace framecert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// Inner product convention used throughout: conjugate-linear in the SECOND
// slot, so that f(lambda) = <f, K_lambda> holds literally for reproducing
// kernels. Eigen's dot() conjugates the first slot, hence the swap.
inline Complex inner(const Vector& x, const Vector& y) { return y.dot(x); }

struct LabeledValue {
  std::string label;
  double value;
};

// Numerical policy shared by every certificate. rank_cutoff_rel left empty
// means max(rows, cols) * eps * 8, resolved per matrix; certificates echo the
// value actually used so results can be reproduced.
struct Tolerances {
  std::optional<double> rank_cutoff_rel{};
  double residual_tol = 1e-9;
  double bound_slack = 1e-8;

  double rank_cutoff(Index rows, Index cols) const {
    if (rank_cutoff_rel) return *rank_cutoff_rel;
    return static_cast<double>(std::max(rows, cols)) *
           std::numeric_limits<double>::epsilon() * 8.0;
  }

  void validate() const {
    if (rank_cutoff_rel && !(*rank_cutoff_rel > 0.0 && *rank_cutoff_rel < 1.0))
      throw InvalidArgumentError("rank_cutoff_rel must lie in (0, 1)");
    if (!(residual_tol > 0.0)) throw InvalidArgumentError("residual_tol must be positive");
    if (!(bound_slack > 0.0)) throw InvalidArgumentError("bound_slack must be positive");
  }
};

inline void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) throw NonFiniteError(std::string(who) + ": non-finite entry");
}

inline void require_finite(const Vector& v, const char* who) {
  if (!v.allFinite()) throw NonFiniteError(std::string(who) + ": non-finite entry");
}

inline void require_square(const Matrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw DimensionMismatchError(std::string(who) + ": matrix must be square and non-empty");
}

// sigma_max, safe on empty blocks.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

struct HermitianEig {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns matching eigenvalues
};

// Eigendecomposition of a Hermitian matrix. The input is accepted when
// ||M - M*||_max <= residual_tol * ||M||_max and symmetrized before the solve
// so that roundoff asymmetry cannot leak into the spectrum.
inline HermitianEig hermitian_eig(const Matrix& m, const Tolerances& tol = {}) {
  require_finite(m, "hermitian_eig");
  require_square(m, "hermitian_eig");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.residual_tol * scale)
    throw NotHermitianError("hermitian_eig: asymmetry " + std::to_string(asym));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(Matrix(0.5 * (m + m.adjoint())));
  if (solver.info() != Eigen::Success)
    throw NonFiniteError("hermitian_eig: solver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

struct Svd {
  Matrix u;                    // full, unitary
  RealVector singular_values;  // descending, nonnegative
  Matrix v;                    // full, unitary
};

inline Svd svd(const Matrix& m) {
  require_finite(m, "svd");
  if (m.size() == 0) throw DimensionMismatchError("svd: empty matrix");
  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

namespace detail {

// Moore-Penrose inverse assembled from an existing decomposition; singular
// values at or below cutoff_abs are treated as exact zeros.
inline Matrix pinv_from(const Svd& f, Index rows, Index cols, double cutoff_abs) {
  Matrix result = Matrix::Zero(cols, rows);
  for (Index i = 0; i < f.singular_values.size(); ++i) {
    if (f.singular_values(i) > cutoff_abs)
      result.noalias() += (1.0 / f.singular_values(i)) * f.v.col(i) * f.u.col(i).adjoint();
  }
  return result;
}

}  // namespace detail

inline Matrix pinv(const Matrix& m, const Tolerances& tol = {}) {
  const Svd f = svd(m);
  const double sigma_max = f.singular_values(0);
  const double cutoff = sigma_max * tol.rank_cutoff(m.rows(), m.cols());
  return detail::pinv_from(f, m.rows(), m.cols(), cutoff);
}

}  // namespace framecert
