#pragma once

#include <Eigen/Core>

#include "kleinian/types.hpp"

namespace kleinian {

// Horner evaluation, highest coefficient first in the recursion. The summation
// order is fixed so repeated runs are bit-identical.
template <typename Scalar, typename Derived>
Scalar horner(const Eigen::MatrixBase<Derived>& coeffs_low_first, const Scalar& x) {
  Scalar acc = Scalar(0);
  for (Eigen::Index k = coeffs_low_first.size() - 1; k >= 0; --k) {
    acc = acc * x + Scalar(coeffs_low_first(k));
  }
  return acc;
}

template <typename Scalar, typename Derived>
Scalar horner_derivative(const Eigen::MatrixBase<Derived>& coeffs_low_first, const Scalar& x) {
  Scalar acc = Scalar(0);
  for (Eigen::Index k = coeffs_low_first.size() - 1; k >= 1; --k) {
    acc = acc * x + Scalar(static_cast<Real>(k)) * Scalar(coeffs_low_first(k));
  }
  return acc;
}

// monic polynomial from its roots; c(k) multiplies x^k
inline Vec poly_from_roots(const Vec& roots) {
  const Eigen::Index n = roots.size();
  Vec c = Vec::Zero(n + 1);
  c(0) = Complex(1, 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex r = roots(i);
    for (Eigen::Index k = i + 1; k >= 1; --k) c(k) = c(k - 1) - r * c(k);
    c(0) = -r * c(0);
  }
  return c;
}

}  // namespace kleinian
