#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kleinian/quadrature.hpp"
#include "oracles.hpp"

using namespace kleinian;

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  for (int n : {4, 9, 16}) {
    const auto& [xs, ws] = gauss_legendre(n);
    // int_{-1}^{1} x^k dx
    for (int k = 0; k <= 2 * n - 1; ++k) {
      Real acc = 0;
      for (int i = 0; i < n; ++i) acc += ws[static_cast<std::size_t>(i)] * std::pow(xs[static_cast<std::size_t>(i)], k);
      const Real exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(acc - exact) < 1e-13);
    }
  }
}

TEST_CASE("branch-endpoint segment integral vs adaptive oracle") {
  // y^2 = x^3 - x on [-1, 0]; int x^p/(2y) dx with the sqrt singularity at
  // both ends. Oracle: substitute x = -sin^2(t), removing both endpoints.
  Vec lam = Vec::Zero(4);
  lam(1) = Complex(-1, 0);
  lam(3) = Complex(1, 0);
  const Curve c = make_curve(1, lam);

  const Complex y_mid = std::sqrt(eval_f(c, Complex(-0.5, 0)));  // principal
  const auto vals = segment_integrals_branch_endpoints(c, Complex(-1, 0), Complex(0, 0), y_mid,
                                                       {0, 1});
  for (int p : {0, 1}) {
    // x = -sin^2 t runs 0 -> -1 (reversed orientation); with f factored,
    // y = s cos(t) sqrt(1+s^2) exactly, so the integrand has no 0/0
    const auto oracle = oracles::adaptive_simpson(
        [&](Real t) -> Complex {
          const Real s = std::sin(t);
          const Complex x(-s * s, 0);
          Complex xp(1, 0);
          for (int e = 0; e < p; ++e) xp *= x;
          return -xp / std::sqrt(Complex(1.0 + s * s, 0));
        },
        0.0, kPi / 2.0, 1e-13);
    CHECK(std::abs(vals[static_cast<std::size_t>(p)] + oracle) <
          1e-10 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("adaptive gl batch integrator") {
  auto f = [](const std::vector<Real>& ts) {
    std::vector<std::vector<Complex>> out(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      out[i] = {std::exp(Complex(0, 2.0) * ts[i]), Complex(ts[i] * ts[i], 0)};
    }
    return out;
  };
  const auto vals = integrate_gl_adaptive(f, 2);
  const Complex exact0 = (std::exp(Complex(0, 2.0)) - 1.0) / Complex(0, 2.0);
  CHECK(std::abs(vals[0] - exact0) < 1e-12);
  CHECK(std::abs(vals[1] - Complex(1.0 / 3.0, 0)) < 1e-12);
}
