#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kleinian/curve.hpp"
#include "kleinian/periods.hpp"
#include "kleinian/rng.hpp"
#include "kleinian/theta.hpp"
#include "oracles.hpp"

using namespace kleinian;

namespace {
Mat test_tau() {
  // a nearby genus-2 period matrix keeps the test representative
  const Curve c = random_curve(1, 2);
  return compute_periods(c).tau;
}

Characteristic chi_of(int a1, int a2, int b1, int b2) {
  Characteristic chi;
  chi.a2 = IntVec(2);
  chi.b2 = IntVec(2);
  chi.a2 << a1, a2;
  chi.b2 << b1, b2;
  return chi;
}
}  // namespace

TEST_CASE("parity for all sixteen characteristics") {
  const Mat tau = test_tau();
  Rng rng(5);
  for (int rep = 0; rep < 2; ++rep) {
    Vec z(2);
    z << rng.uniform_box(0.7, 0.4), rng.uniform_box(0.7, 0.4);
    const Vec mz = -z;
    for (int am = 0; am < 4; ++am) {
      for (int bm = 0; bm < 4; ++bm) {
        const Characteristic chi = chi_of(am & 1, am >> 1, bm & 1, bm >> 1);
        const Complex tp = theta(z, tau, chi);
        const Complex tm = theta(mz, tau, chi);
        const Real sign = (chi.parity() == 1) ? -1.0 : 1.0;
        CHECK(std::abs(tm - sign * tp) <= 1e-12 * (1.0 + std::abs(tp)));
      }
    }
  }
}

TEST_CASE("diagonal tau splits into a product of 1-d thetas") {
  Mat tau(2, 2);
  tau << Complex(0, 1.3), Complex(0, 0), Complex(0, 0), Complex(0, 0.8);
  Rng rng(17);
  for (int rep = 0; rep < 3; ++rep) {
    Vec z(2);
    z << rng.uniform_box(0.6, 0.3), rng.uniform_box(0.6, 0.3);
    const Characteristic chi = chi_of(1, 0, 1, 1);
    const Complex full = theta(z, tau, chi);
    const Complex split = oracles::theta_1d(z(0), tau(0, 0), 0.5, 0.5) *
                          oracles::theta_1d(z(1), tau(1, 1), 0.0, 0.5);
    CHECK(std::abs(full - split) <= 1e-12 * (1.0 + std::abs(full)));
  }
}

TEST_CASE("quasi-periodicity") {
  const Mat tau = test_tau();
  const Characteristic chi = chi_of(1, 1, 0, 1);
  Rng rng(23);
  Vec z(2);
  z << rng.uniform_box(0.5, 0.5), rng.uniform_box(0.5, 0.5);
  for (int rep = 0; rep < 4; ++rep) {
    IntVec m(2), mp(2);
    m << static_cast<int>(rng.next_u64() % 5) - 2, static_cast<int>(rng.next_u64() % 5) - 2;
    mp << static_cast<int>(rng.next_u64() % 5) - 2, static_cast<int>(rng.next_u64() % 5) - 2;
    const Vec zs = z + m.cast<Real>().cast<Complex>() + tau * mp.cast<Real>().cast<Complex>();
    const Complex lhs = theta(zs, tau, chi);
    const Vec a = chi.a(), b = chi.b();
    Complex am(0, 0), quad(0, 0), lin(0, 0);
    for (int i = 0; i < 2; ++i) {
      am += a(i) * static_cast<Real>(m(i));
      lin += static_cast<Real>(mp(i)) * (z(i) + b(i));
      for (int j = 0; j < 2; ++j) {
        quad += 0.5 * static_cast<Real>(mp(i)) * tau(i, j) * static_cast<Real>(mp(j));
      }
    }
    const Complex rhs = std::exp(2.0 * kPi * kI * (am - quad - lin)) * theta(z, tau, chi);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("derivatives: order zero and finite differences") {
  const Mat tau = test_tau();
  const Characteristic chi = chi_of(0, 1, 1, 1);
  Vec z(2);
  z << Complex(0.21, 0.11), Complex(-0.17, 0.23);

  CHECK(theta_deriv(z, tau, chi, {}) == theta(z, tau, chi));

  auto f = [&](const Vec& zz) { return theta(zz, tau, chi); };
  // first derivative, h = 1e-5 with one Richardson level
  const Complex d1 = theta_deriv(z, tau, chi, {0});
  const Complex fd1 = oracles::fd_richardson(f, z, {0}, 1e-5, 1);
  CHECK(std::abs(d1 - fd1) <= 1e-8 * (1.0 + std::abs(d1)));

  for (const MultiIndex alpha : {MultiIndex{1}, MultiIndex{0, 1}, MultiIndex{1, 1}}) {
    const Complex an = theta_deriv(z, tau, chi, alpha);
    const Complex fd = oracles::fd_richardson(f, z, alpha, 1e-4, 1);
    CHECK(std::abs(an - fd) <= 1e-7 * (1.0 + std::abs(an)));
  }
  // high orders need a larger base step: the nested stencil's rounding error
  // grows like eps / h^4
  for (const MultiIndex alpha : {MultiIndex{0, 1, 1}, MultiIndex{0, 0, 1, 1}}) {
    const Complex an = theta_deriv(z, tau, chi, alpha);
    const Complex fd = oracles::fd_richardson(f, z, alpha, 1.2e-2, 2);
    CHECK(std::abs(an - fd) <= 1e-5 * (1.0 + std::abs(an)));
  }
}

TEST_CASE("odd characteristics vanish at zero with nonzero gradient") {
  const Mat tau = test_tau();
  for (const Characteristic& chi : odd_characteristics(2)) {
    const Vec zero = Vec::Zero(2);
    CHECK(std::abs(theta(zero, tau, chi)) < 1e-12);
    const Real grad = std::abs(theta_deriv(zero, tau, chi, {0})) +
                      std::abs(theta_deriv(zero, tau, chi, {1}));
    CHECK(grad > 1e-6);
  }
}

TEST_CASE("argument reduction") {
  const Mat tau = test_tau();
  const Characteristic chi = chi_of(1, 0, 1, 0);
  Rng rng(31);

  // already reduced: identity with zero prefactor
  Vec z0(2);
  z0 << Complex(0.12, 0.0), Complex(-0.21, 0.0);
  const ReducedArgument r0 = reduce_argument(z0, tau, chi);
  CHECK(r0.m.cwiseAbs().maxCoeff() == 0);
  CHECK(r0.mp.cwiseAbs().maxCoeff() == 0);
  CHECK(std::abs(r0.log_prefactor) == 0.0);
  CHECK((r0.z_red - z0).cwiseAbs().maxCoeff() == 0.0);

  // round trip against the direct sum for shifts up to 3
  for (int rep = 0; rep < 5; ++rep) {
    IntVec m(2), mp(2);
    m << static_cast<int>(rng.next_u64() % 7) - 3, static_cast<int>(rng.next_u64() % 7) - 3;
    mp << static_cast<int>(rng.next_u64() % 7) - 3, static_cast<int>(rng.next_u64() % 7) - 3;
    Vec z(2);
    z << rng.uniform_box(0.4, 0.2), rng.uniform_box(0.4, 0.2);
    z += m.cast<Real>().cast<Complex>() + tau * mp.cast<Real>().cast<Complex>();
    const ReducedArgument red = reduce_argument(z, tau, chi);
    // shifts are exact integers by type; the reduced imaginary part is small
    const RealVec t = tau.imag().llt().solve(red.z_red.imag());
    CHECK(t.cwiseAbs().maxCoeff() <= 0.5 + 1e-12);
    const Complex direct = theta(z, tau, chi);
    const Complex via = std::exp(red.log_prefactor) * theta(red.z_red, tau, chi);
    CHECK(std::abs(direct - via) <= 1e-10 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("tail bound: halving eps moves the value by less than 10 eps") {
  const Mat tau = test_tau();
  const Characteristic chi = chi_of(0, 1, 0, 1);
  Vec z(2);
  z << Complex(0.31, 0.21), Complex(0.11, -0.13);
  ThetaConfig a;
  a.eps = 1e-10;
  ThetaConfig b;
  b.eps = 5e-11;
  const Complex va = theta(z, tau, chi, a);
  const Complex vb = theta(z, tau, chi, b);
  CHECK(std::abs(va - vb) <= 10.0 * a.eps * (1.0 + std::abs(va)));
}

TEST_CASE("radius cap throws for hopeless tau") {
  Mat tau(2, 2);
  tau << Complex(0, 1e-5), Complex(0, 0), Complex(0, 0), Complex(0, 1e-5);
  const Characteristic chi = chi_of(0, 0, 0, 0);
  Vec z = Vec::Zero(2);
  CHECK_THROWS_AS((void)theta(z, tau, chi), radius_cap_error);
}
