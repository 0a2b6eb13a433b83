#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "framecert/numeric.hpp"

namespace framecert {

// Radial weight r in [0,1) -> omega(r) > 0. Evaluation is range-checked so a
// bad weight fails loudly inside quadrature instead of poisoning an integral.
struct WeightFunction {
  std::function<double(double)> evaluator;

  double operator()(double r) const {
    const double value = evaluator(r);
    if (!std::isfinite(value)) throw NonFiniteError("WeightFunction: non-finite value");
    if (value <= 0.0) throw InvalidArgumentError("WeightFunction: weight must be positive");
    return value;
  }
};

inline WeightFunction constant_weight(double c = 1.0) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgumentError("constant_weight: c must be positive");
  return {[c](double) { return c; }};
}

// (1 - r^2)^s
inline WeightFunction poly_weight(double s) {
  if (!std::isfinite(s)) throw InvalidArgumentError("poly_weight: s must be finite");
  return {[s](double r) { return std::pow(1.0 - r * r, s); }};
}

// (1 - r^2)^s * (log(e / (1 - r^2)))^t
inline WeightFunction log_weight(double s, double t) {
  if (!std::isfinite(s) || !std::isfinite(t))
    throw InvalidArgumentError("log_weight: parameters must be finite");
  return {[s, t](double r) {
    const double u = 1.0 - r * r;
    return std::pow(u, s) * std::pow(std::log(std::exp(1.0) / u), t);
  }};
}

// K_lambda(z) = (1 - conj(lambda) z)^{-(2 + eta)} on the unit disk,
// square-integrable against dA_eta = (eta + 1)(1 - |z|^2)^eta dA.
struct BergmanKernel {
  double eta = 0.0;  // eta > -1
};

// K_lambda(z) = exp(alpha z conj(lambda)) on C, against (alpha/pi) e^{-alpha |z|^2} dA.
struct FockKernel {
  double alpha = 1.0;  // alpha > 0
};

// Bergman space with measure omega dA for a radial weight; the kernel has no
// closed form, only the norm estimate based on the disc integral below, so
// disc_alpha selects the disc D_{lambda,alpha} used for it.
struct WeightedBergmanKernel {
  WeightFunction weight;
  double eta = 0.0;  // class parameter of the square condition, eta > -1
  std::optional<double> disc_alpha{};  // in (0,1); required for norm estimates
};

using KernelSpec = std::variant<BergmanKernel, FockKernel, WeightedBergmanKernel>;

inline void validate(const KernelSpec& spec) {
  if (const auto* b = std::get_if<BergmanKernel>(&spec)) {
    if (!(b->eta > -1.0) || !std::isfinite(b->eta))
      throw InvalidArgumentError("BergmanKernel: eta must exceed -1");
  } else if (const auto* f = std::get_if<FockKernel>(&spec)) {
    if (!(f->alpha > 0.0) || !std::isfinite(f->alpha))
      throw InvalidArgumentError("FockKernel: alpha must be positive");
  } else {
    const auto& w = std::get<WeightedBergmanKernel>(spec);
    if (!(w.eta > -1.0) || !std::isfinite(w.eta))
      throw InvalidArgumentError("WeightedBergmanKernel: eta must exceed -1");
    if (!w.weight.evaluator) throw InvalidArgumentError("WeightedBergmanKernel: missing weight");
    if (w.disc_alpha && !(*w.disc_alpha > 0.0 && *w.disc_alpha < 1.0))
      throw InvalidArgumentError("WeightedBergmanKernel: disc_alpha must lie in (0, 1)");
  }
}

inline bool in_unit_disk(Complex z) { return std::abs(z) < 1.0; }

namespace detail {

inline void require_in_disk(Complex z, const char* who) {
  if (!(std::isfinite(z.real()) && std::isfinite(z.imag())))
    throw NonFiniteError(std::string(who) + ": non-finite point");
  if (!in_unit_disk(z))
    throw DomainViolationError(std::string(who) + ": point outside the unit disk");
}

inline void require_finite_point(Complex z, const char* who) {
  if (!(std::isfinite(z.real()) && std::isfinite(z.imag())))
    throw NonFiniteError(std::string(who) + ": non-finite point");
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [a, b], nodes by Newton iteration on P_n. The
// iteration is seeded with the Chebyshev estimates and runs to fixed point,
// so the rule is deterministic.
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const double half = 0.5 * (b - a);
    const double center = 0.5 * (a + b);
    rule.nodes[static_cast<std::size_t>(i)] = center - half * x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = center + half * x;
    rule.weights[static_cast<std::size_t>(i)] = half * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = half * w;
  }
  return rule;
}

// Relative-change gate shared by every adaptive integral: accept the finer
// value when doubling the resolution moves the result by less than 0.1%.
inline double convergence_gate(double coarse, double fine, const char* who) {
  const double scale = std::max(std::abs(fine), 1e-300);
  if (std::abs(fine - coarse) > 1e-3 * scale)
    throw QuadratureDivergenceError(std::string(who) + ": result not converged at this resolution");
  return fine;
}

}  // namespace detail

// Disc D_{lambda, alpha} = {z : |z - lambda| < alpha (1 - |lambda|)}, always
// contained in the unit disk for alpha in (0, 1).
struct DiscSpec {
  Complex center;
  double alpha = 0.5;
};

// Integral of a radial weight over the disc against the normalized area
// measure dA = dx dy / pi, by Gauss-Legendre in the radius about the disc
// center and a uniform periodic rule in angle.
inline double disc_integral(const WeightFunction& weight, const DiscSpec& disc, int resolution) {
  detail::require_in_disk(disc.center, "disc_integral");
  if (!(disc.alpha > 0.0 && disc.alpha < 1.0))
    throw InvalidArgumentError("disc_integral: alpha must lie in (0, 1)");
  if (resolution < 16) throw InvalidArgumentError("disc_integral: resolution must be >= 16");

  const double radius = disc.alpha * (1.0 - std::abs(disc.center));
  const auto evaluate = [&](int n) {
    const auto radial = detail::gauss_legendre(n, 0.0, radius);
    const double dphi = 2.0 * M_PI / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double rho = radial.nodes[static_cast<std::size_t>(i)];
      double ring = 0.0;
      for (int j = 0; j < n; ++j) {
        const double phi = dphi * j;
        const Complex z = disc.center + rho * Complex(std::cos(phi), std::sin(phi));
        ring += weight(std::abs(z));
      }
      sum += radial.weights[static_cast<std::size_t>(i)] * rho * ring * dphi;
    }
    return sum / M_PI;
  };
  return detail::convergence_gate(evaluate(resolution), evaluate(2 * resolution), "disc_integral");
}

inline Complex kernel_eval(const KernelSpec& spec, Complex z, Complex lambda) {
  validate(spec);
  if (const auto* b = std::get_if<BergmanKernel>(&spec)) {
    detail::require_in_disk(z, "kernel_eval");
    detail::require_in_disk(lambda, "kernel_eval");
    return std::pow(Complex(1.0, 0.0) - std::conj(lambda) * z, -(2.0 + b->eta));
  }
  if (const auto* f = std::get_if<FockKernel>(&spec)) {
    detail::require_finite_point(z, "kernel_eval");
    detail::require_finite_point(lambda, "kernel_eval");
    return std::exp(f->alpha * z * std::conj(lambda));
  }
  throw NotAvailableError("kernel_eval: weighted Bergman kernels have no closed form");
}

// ||K_lambda||. Closed form for the Bergman and Fock kernels; for weighted
// Bergman the value is the (integral over D_{lambda,alpha} of omega)^{-1/2}
// estimate, correct only up to equivalence constants -- see
// kernel_norm_is_estimate.
inline double kernel_norm(const KernelSpec& spec, Complex lambda, int resolution = 64) {
  validate(spec);
  if (const auto* b = std::get_if<BergmanKernel>(&spec)) {
    detail::require_in_disk(lambda, "kernel_norm");
    return std::pow(1.0 - std::norm(lambda), -(1.0 + 0.5 * b->eta));
  }
  if (const auto* f = std::get_if<FockKernel>(&spec)) {
    detail::require_finite_point(lambda, "kernel_norm");
    const double value = std::exp(0.5 * f->alpha * std::norm(lambda));
    if (!std::isfinite(value)) throw NonFiniteError("kernel_norm: overflow at this point");
    return value;
  }
  const auto& w = std::get<WeightedBergmanKernel>(spec);
  detail::require_in_disk(lambda, "kernel_norm");
  if (!w.disc_alpha)
    throw NotAvailableError("kernel_norm: weighted norm estimate requires disc_alpha");
  return 1.0 / std::sqrt(disc_integral(w.weight, {lambda, *w.disc_alpha}, resolution));
}

inline bool kernel_norm_is_estimate(const KernelSpec& spec) {
  return std::holds_alternative<WeightedBergmanKernel>(spec);
}

// k_lambda(z) = K_lambda(z) / ||K_lambda||; satisfies k_lambda(lambda) = ||K_lambda||.
inline Complex normalized_kernel_eval(const KernelSpec& spec, Complex z, Complex lambda,
                                      int resolution = 64) {
  return kernel_eval(spec, z, lambda) / kernel_norm(spec, lambda, resolution);
}

// Boundary box S(theta, h) = {r e^{i a} : 1 - h < r < 1, |theta - a| < h/2}.
struct CarlesonSquare {
  double theta = 0.0;  // in [0, 2 pi]
  double h = 0.5;      // in (0, 1)
};

inline std::vector<CarlesonSquare> default_carleson_grid(int h_count = 16, int theta_count = 16,
                                                         double h_min = 1e-2, double h_max = 0.9) {
  if (h_count < 1 || theta_count < 1) throw InvalidArgumentError("default_carleson_grid: empty grid");
  if (!(h_min > 0.0 && h_min <= h_max && h_max < 1.0))
    throw InvalidArgumentError("default_carleson_grid: need 0 < h_min <= h_max < 1");
  std::vector<CarlesonSquare> grid;
  grid.reserve(static_cast<std::size_t>(h_count) * static_cast<std::size_t>(theta_count));
  for (int i = 0; i < h_count; ++i) {
    const double f = h_count == 1 ? 0.0 : static_cast<double>(i) / (h_count - 1);
    const double h = std::exp(std::log(h_min) + f * (std::log(h_max) - std::log(h_min)));
    for (int j = 0; j < theta_count; ++j)
      grid.push_back({2.0 * M_PI * j / theta_count, h});
  }
  return grid;
}

namespace detail {

// Integral of g(r) over a Carleson square against dA_eta. The integrand is
// radial, so the angular integral is exactly the width h and only the radial
// direction needs a quadrature rule. Weights in this class are allowed
// algebraic singularities at the boundary, which plain Gauss-Legendre on
// [1-h, 1] resolves too slowly for the convergence gate; the substitution
// r = 1 - h t^2 clusters nodes at the boundary and restores fast convergence
// for every integrable power while still blowing up on non-integrable ones.
inline double carleson_integral(const std::function<double(double)>& g, double eta,
                                const CarlesonSquare& square, int resolution) {
  const auto rule = gauss_legendre(resolution, 0.0, 1.0);
  double sum = 0.0;
  for (int i = 0; i < resolution; ++i) {
    const double t = rule.nodes[static_cast<std::size_t>(i)];
    const double r = 1.0 - square.h * t * t;
    sum += rule.weights[static_cast<std::size_t>(i)] * 2.0 * square.h * t * g(r) * (eta + 1.0) *
           std::pow(1.0 - r * r, eta) * r;
  }
  return sum * square.h / M_PI;
}

inline double gated_carleson_integral(const std::function<double(double)>& g, double eta,
                                      const CarlesonSquare& square, int resolution) {
  return convergence_gate(carleson_integral(g, eta, square, resolution),
                          carleson_integral(g, eta, square, 2 * resolution), "bekolle_ratio");
}

}  // namespace detail

// Scan of the square-condition ratio
//   (int_S omega dA_eta)(int_S omega^{-1} dA_eta) / [A_eta(S)]^2
// over a grid of Carleson squares. The supremum over all squares is not
// computable, so the result is a lower estimate of the true constant; it is
// >= 1 by Cauchy-Schwarz, with equality exactly for constant weights.
struct BekolleScan {
  double sup_ratio = 0.0;
  CarlesonSquare argmax;
  bool grid_lower_estimate = true;
  std::vector<double> ratios;  // per grid square, scan order
};

inline BekolleScan bekolle_ratio(const WeightFunction& weight, double eta,
                                 std::span<const CarlesonSquare> grid, int resolution) {
  if (grid.empty()) throw InvalidArgumentError("bekolle_ratio: empty grid");
  if (!(eta > -1.0)) throw InvalidArgumentError("bekolle_ratio: eta must exceed -1");
  if (resolution < 16) throw InvalidArgumentError("bekolle_ratio: resolution must be >= 16");

  const auto direct = [&](double r) { return weight(r); };
  const auto inverse = [&](double r) { return 1.0 / weight(r); };
  const auto unit = [](double) { return 1.0; };

  BekolleScan scan;
  scan.ratios.reserve(grid.size());
  for (const auto& square : grid) {
    if (!(square.h > 0.0 && square.h < 1.0))
      throw InvalidArgumentError("bekolle_ratio: square height must lie in (0, 1)");
    const double i_direct = detail::gated_carleson_integral(direct, eta, square, resolution);
    const double i_inverse = detail::gated_carleson_integral(inverse, eta, square, resolution);
    const double area = detail::gated_carleson_integral(unit, eta, square, resolution);
    const double ratio = i_direct * i_inverse / (area * area);
    scan.ratios.push_back(ratio);
    if (ratio > scan.sup_ratio) {
      scan.sup_ratio = ratio;
      scan.argmax = square;
    }
  }
  return scan;
}

}  // namespace framecert
