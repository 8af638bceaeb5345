#pragma once

#include <functional>
#include <vector>

#include "kleinian/curve.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

// Gauss-Legendre nodes/weights on [-1,1]; cached per order
const std::pair<std::vector<Real>, std::vector<Real>>& gauss_legendre(int n);

// Integrals  int_a^b x^p / (2 y) dx  for each requested power p, where both a
// and b are branch points of the curve. Gauss-Chebyshev nodes absorb the
// inverse-square-root singularity at the two endpoints: with
// x = c + r cos(theta) and W = y / sqrt(1 - s^2), the integrand is analytic.
// y_mid fixes the sheet at the segment midpoint; node count doubles until two
// successive levels agree to tol::quadrature relative (cap 2^14 nodes).
std::vector<Complex> segment_integrals_branch_endpoints(const Curve& curve, Complex a, Complex b,
                                                        Complex y_mid,
                                                        const std::vector<int>& powers);

// Regular-path integral of a vector-valued integrand over [0,1] by
// Gauss-Legendre with node doubling. The integrand is evaluated one level at
// a time on the full ascending node set, so callers can carry sheet state
// through the sequence.
using BatchIntegrand =
    std::function<std::vector<std::vector<Complex>>(const std::vector<Real>& ts)>;
std::vector<Complex> integrate_gl_adaptive(const BatchIntegrand& f, int n_components,
                                           int n_start = 16);

}  // namespace kleinian
