// Independent reference implementations used only as test oracles. These
// deliberately avoid the library's evaluation paths: naive power sums,
// adaptive Simpson quadrature, a one-dimensional theta series, nested finite
// differences, and the arithmetic-geometric mean.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "kleinian/types.hpp"

namespace oracles {

using kleinian::Complex;
using kleinian::Real;

// plain power-sum evaluation (no Horner)
inline Complex naive_poly_eval(const kleinian::Vec& coeffs_low_first, Complex x) {
  Complex acc(0, 0);
  for (Eigen::Index k = 0; k < coeffs_low_first.size(); ++k) {
    Complex p(1, 0);
    for (Eigen::Index e = 0; e < k; ++e) p *= x;
    acc += coeffs_low_first(k) * p;
  }
  return acc;
}

// adaptive Simpson on [0,1] for complex integrands
inline Complex adaptive_simpson(const std::function<Complex(Real)>& f, Real a, Real b,
                                Real tol = 1e-12, int depth = 0) {
  const Real m = 0.5 * (a + b);
  const Complex fa = f(a), fb = f(b), fm = f(m);
  const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const Real lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const Complex flm = f(lm), frm = f(rm);
  const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth > 28 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, tol / 2, depth + 1) +
         adaptive_simpson(f, m, b, tol / 2, depth + 1);
}

// genus-1 theta with characteristic, direct scalar series
inline Complex theta_1d(Complex z, Complex tau, Real a, Real b, int radius = 64) {
  Complex total(0, 0);
  for (int n = -radius; n <= radius; ++n) {
    const Complex p = Complex(n, 0) + a;
    total += std::exp(2.0 * kleinian::kPi * kleinian::kI *
                      (0.5 * p * p * tau + p * (z + b)));
  }
  return total;
}

inline Real agm(Real a, Real b) {
  for (int i = 0; i < 300 && std::abs(a - b) > 1e-17 * (a + b); ++i) {
    const Real an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return a;
}

// nested central differences of a complex function along real directions
inline Complex finite_difference(const std::function<Complex(const kleinian::Vec&)>& f,
                                 kleinian::Vec z, std::vector<int> alpha, Real h) {
  if (alpha.empty()) return f(z);
  const int dir = alpha.back();
  alpha.pop_back();
  kleinian::Vec zp = z, zm = z;
  zp(dir) += Complex(h, 0);
  zm(dir) -= Complex(h, 0);
  return (finite_difference(f, zp, alpha, h) - finite_difference(f, zm, alpha, h)) / (2.0 * h);
}

inline Complex fd_richardson(const std::function<Complex(const kleinian::Vec&)>& f,
                             const kleinian::Vec& z, const std::vector<int>& alpha, Real h,
                             int levels) {
  std::vector<Complex> d;
  for (int l = 0; l <= levels; ++l) {
    d.push_back(finite_difference(f, z, alpha, h / std::pow(2.0, l)));
  }
  for (int l = 1; l <= levels; ++l) {
    const Real fpow = std::pow(4.0, l);
    for (int i = static_cast<int>(d.size()) - 1; i >= l; --i) {
      d[static_cast<std::size_t>(i)] =
          (fpow * d[static_cast<std::size_t>(i)] - d[static_cast<std::size_t>(i - 1)]) /
          (fpow - 1.0);
    }
  }
  return d.back();
}

}  // namespace oracles
