// Audits a 25-point square lattice as a sampling set for the degree-6 Fock
// model, then reconstructs a polynomial from its lattice samples.

#include <cstdio>

#include "framecert/framecert.hpp"

int main() {
  using namespace framecert;

  const auto basis = build_basis(FockKernel{1.0}, 6);
  const PointSet lattice = square_lattice(0.5, 1.0);
  const auto audit = sampling_audit(basis, lattice);

  std::printf("lattice points: %zu, model dimension: %d\n", lattice.size(), basis.degree + 1);
  if (audit.certificate.lower_A)
    std::printf("sampling bounds: A = %.6g, B = %.6g\n", *audit.certificate.lower_A,
                audit.certificate.upper_B);
  std::printf("worst truncation ratio: %.6f\n",
              *std::min_element(audit.truncation_diagnostics.begin(),
                                audit.truncation_diagnostics.end()));

  Vector f = Vector::Zero(7);
  f(0) = Complex(1.0, 0.0);
  f(3) = Complex(0.0, -0.5);
  const auto rec =
      operator_sample_reconstruct(basis, lattice, Matrix::Identity(7, 7), f);
  std::printf("reconstruction relative error: %.3e\n", rec.relative_error);
  return 0;
}
