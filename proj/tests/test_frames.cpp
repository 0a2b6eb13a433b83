#include <catch2/catch_amalgamated.hpp>

#include "framecert/frames.hpp"
#include "oracles.hpp"

using namespace framecert;

namespace {

FrameFamily standard_basis(Index d) { return FrameFamily(Matrix::Identity(d, d)); }

// Three unit vectors in the real plane at 120 degree spacing.
FrameFamily mercedes() {
  Matrix m(2, 3);
  for (int k = 0; k < 3; ++k) {
    const double angle = 2.0 * M_PI * k / 3.0 + 0.3;
    m(0, k) = std::cos(angle);
    m(1, k) = std::sin(angle);
  }
  return FrameFamily(m);
}

FrameFamily doubled_e1() {  // {e1, e1, e2} in C^2
  Matrix m(2, 3);
  m.setZero();
  m(0, 0) = 1.0;
  m(0, 1) = 1.0;
  m(1, 2) = 1.0;
  return FrameFamily(m);
}

std::vector<Vector> columns(const FrameFamily& f) {
  std::vector<Vector> out;
  for (Index n = 0; n < f.size(); ++n) out.push_back(f.vector(n));
  return out;
}

}  // namespace

TEST_CASE("analysis returns <x, f_n> in the stated convention") {
  Vector x(2);
  x << Complex(3, 0), Complex(0, 4);
  const Vector coeffs = analysis(standard_basis(2), x);
  CHECK(std::abs(coeffs(0) - Complex(3, 0)) < 1e-15);
  CHECK(std::abs(coeffs(1) - Complex(0, 4)) < 1e-15);

  Matrix repeated(2, 2);
  repeated << 1, 1, 0, 0;
  const Vector again = analysis(FrameFamily(repeated), Vector(Vector::Unit(2, 0)));
  CHECK(std::abs(again(0) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(again(1) - Complex(1, 0)) < 1e-15);

  CHECK_THROWS_AS(analysis(standard_basis(2), Vector(Vector::Zero(3))), DimensionMismatchError);
}

TEST_CASE("analysis and synthesis match the naive loop oracle") {
  auto gen = oracle::rng(201);
  for (int trial = 0; trial < 20; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 4);
    const Index n = d + 3;
    const FrameFamily family(oracle::random_matrix(d, n, gen));
    const auto cols = columns(family);
    const Vector x = oracle::random_vector(d, gen);
    const Vector c = oracle::random_vector(n, gen);

    CHECK((analysis(family, x) - oracle::naive_analysis(cols, x)).norm() < 1e-12);
    CHECK((synthesis(family, c) - oracle::naive_synthesis(cols, c)).norm() < 1e-12);

    // Adjointness <T c, x> = <c, Theta x>.
    const Complex lhs = inner(synthesis(family, c), x);
    const Complex rhs = inner(c, analysis(family, x));
    CHECK(std::abs(lhs - rhs) < 1e-9);
  }
}

TEST_CASE("synthesis trivial cases") {
  const FrameFamily basis = standard_basis(2);
  CHECK(synthesis(basis, Vector(Vector::Zero(2))).norm() == 0.0);
  Vector c(2);
  c << Complex(1, 0), Complex(2, 0);
  CHECK((synthesis(basis, c) - c).norm() < 1e-15);
  CHECK_THROWS_AS(synthesis(basis, Vector(Vector::Zero(3))), DimensionMismatchError);
}

TEST_CASE("frame_operator matches the direct summation oracle") {
  CHECK((frame_operator(standard_basis(2)) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-15);

  const Matrix s = frame_operator(doubled_e1());
  CHECK(std::abs(s(0, 0) - Complex(2, 0)) < 1e-15);
  CHECK(std::abs(s(1, 1) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(s(0, 1)) < 1e-15);

  const Matrix sm = frame_operator(mercedes());
  CHECK((sm - 1.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  auto gen = oracle::rng(202);
  const FrameFamily family(oracle::random_matrix(3, 7, gen));
  CHECK((frame_operator(family) - oracle::naive_frame_operator(columns(family)))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("frame_operator is Hermitian positive semidefinite") {
  auto gen = oracle::rng(203);
  const Tolerances tol;
  for (int trial = 0; trial < 10; ++trial) {
    const FrameFamily family(oracle::random_matrix(4, 4 + trial, gen));
    const Matrix s = frame_operator(family);
    const auto eig = hermitian_eig(s, tol);
    CHECK(eig.eigenvalues(0) >= -tol.residual_tol * eig.eigenvalues.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Parseval identity <Sx, x> = sum |<x, f_n>|^2") {
  auto gen = oracle::rng(204);
  const FrameFamily family(oracle::random_matrix(4, 9, gen));
  const Matrix s = frame_operator(family);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = oracle::random_vector(4, gen);
    const double lhs = inner(Vector(s * x), x).real();
    const double rhs = analysis(family, x).squaredNorm();
    CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, rhs));
  }
}

TEST_CASE("frame_bounds reports the optimal constants") {
  const auto parseval = frame_bounds(standard_basis(2));
  REQUIRE(parseval.lower_A.has_value());
  CHECK(*parseval.lower_A == Catch::Approx(1.0));
  CHECK(parseval.upper_B == Catch::Approx(1.0));
  CHECK(parseval.is_frame);

  const auto doubled = frame_bounds(doubled_e1());
  REQUIRE(doubled.lower_A.has_value());
  CHECK(*doubled.lower_A == Catch::Approx(1.0));
  CHECK(doubled.upper_B == Catch::Approx(2.0));

  // A single vector cannot span C^2: no lower bound, not a frame.
  Matrix single(2, 1);
  single << 1, 0;
  const auto deficient = frame_bounds(FrameFamily(single));
  CHECK_FALSE(deficient.lower_A.has_value());
  CHECK_FALSE(deficient.is_frame);
  CHECK(deficient.upper_B == Catch::Approx(1.0));
}

TEST_CASE("frame_bounds lower constant is optimal") {
  auto gen = oracle::rng(205);
  const Tolerances tol;
  const FrameFamily family(oracle::random_matrix(3, 6, gen));
  const auto cert = frame_bounds(family, tol);
  REQUIRE(cert.lower_A.has_value());

  // The eigenvector of lambda_min witnesses that A' = A + 10 slack fails.
  const auto eig = hermitian_eig(frame_operator(family), tol);
  const Vector witness = eig.eigenvectors.col(0);
  const double energy = analysis(family, witness).squaredNorm();
  const double inflated = (*cert.lower_A + 10.0 * tol.bound_slack) * witness.squaredNorm();
  CHECK(energy < inflated);
}

TEST_CASE("bessel_bound covers degenerate and generic families") {
  CHECK(bessel_bound(FrameFamily(Matrix::Zero(2, 2))) == 0.0);
  CHECK(bessel_bound(standard_basis(3)) == Catch::Approx(1.0));

  // Rayleigh sampling from below, closed exactly by the top eigenvector.
  auto gen = oracle::rng(206);
  const FrameFamily family(oracle::random_matrix(3, 8, gen));
  const double bound = bessel_bound(family);
  double sampled = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Vector x = oracle::random_unit(3, gen);
    sampled = std::max(sampled, analysis(family, x).squaredNorm());
    CHECK(sampled <= bound * (1.0 + 1e-9));
  }
  const auto eig = hermitian_eig(frame_operator(family));
  const Vector top = eig.eigenvectors.col(2);
  sampled = std::max(sampled, analysis(family, Vector(top / top.norm())).squaredNorm());
  CHECK(sampled >= bound * (1.0 - 1e-9));
  CHECK(sampled <= bound * (1.0 + 1e-9));
}

TEST_CASE("canonical_dual inverts the frame operator") {
  const auto self_dual = canonical_dual(standard_basis(2));
  CHECK((self_dual.synthesis_matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  const auto dual = canonical_dual(doubled_e1());
  CHECK(std::abs(dual.vector(0)(0) - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(dual.vector(1)(0) - Complex(0.5, 0)) < 1e-12);
  CHECK(std::abs(dual.vector(2)(1) - Complex(1.0, 0)) < 1e-12);

  auto gen = oracle::rng(207);
  const FrameFamily family(oracle::random_matrix(4, 7, gen));
  const auto twice = canonical_dual(canonical_dual(family));
  CHECK((twice.synthesis_matrix() - family.synthesis_matrix()).cwiseAbs().maxCoeff() < 1e-10);

  const Matrix s = frame_operator(family);
  const Matrix s_dual = frame_operator(canonical_dual(family));
  CHECK(spectral_norm(s_dual * s - Matrix::Identity(4, 4)) < 1e-9);

  Matrix single(2, 1);
  single << 1, 0;
  CHECK_THROWS_AS(canonical_dual(FrameFamily(single)), NotAFrameError);
}

TEST_CASE("reconstruct recovers every vector through both expansions") {
  Vector x(2);
  x << Complex(0.3, -1.2), Complex(2.0, 0.7);
  CHECK((reconstruct(standard_basis(2), x) - x).norm() < 1e-14);

  Vector xi(2);
  xi << Complex(1, 0), Complex(0, 1);
  CHECK((reconstruct(mercedes(), xi) - xi).norm() < 1e-10);

  auto gen = oracle::rng(208);
  const FrameFamily family(oracle::random_matrix(6, 10, gen));
  const auto dual = canonical_dual(family);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector v = oracle::random_vector(6, gen);
    const Vector direct = reconstruct(family, v);
    const Vector swapped = synthesis(family, analysis(dual, v));
    CHECK((direct - v).norm() < 1e-10 * v.norm());
    CHECK((swapped - v).norm() < 1e-10 * v.norm());
    CHECK((direct - swapped).norm() < 1e-10 * v.norm());
  }

  Matrix single(2, 1);
  single << 1, 0;
  CHECK_THROWS_AS(reconstruct(FrameFamily(single), x), NotAFrameError);
}

TEST_CASE("families admit zero vectors but not empty or non-finite input") {
  Matrix with_zero(2, 3);
  with_zero.setZero();
  with_zero(0, 0) = 1.0;
  CHECK_NOTHROW(FrameFamily(with_zero));
  CHECK_THROWS_AS(FrameFamily(Matrix(2, 0)), DimensionMismatchError);
  CHECK_THROWS_AS(FrameFamily(Matrix::Constant(2, 2, Complex(std::nan(""), 0))), NonFiniteError);
}
