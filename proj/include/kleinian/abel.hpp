#pragma once

#include <utility>
#include <vector>

#include "kleinian/curve.hpp"
#include "kleinian/periods.hpp"
#include "kleinian/report.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

struct SigmaContext;  // abel only needs curve + periods; inversion checks take a context

struct DivisorPair {
  CurvePoint p1, p2;
};

// sampled integration route from infinity to a point: a leg in the s-chart
// (x = 1/s^2, where du_k is regular) followed by a polyline in the x-chart
// with detours around branch points
struct AbelPath {
  Complex x_far;                  // chart switch point
  std::vector<Complex> x_legs;    // waypoints from x_far to the target
  Real direction = 0.37;          // argument of the far-point ray
};

// Abel map with base point infinity: u_k = sum_points int_infty^P du_k.
// `direction` perturbs the default route (used by path-independence tests);
// results for different routes agree modulo the period lattice.
Vec abel(const Curve& curve, const PeriodData& pd, const DivisorPair& d, Real direction = 0.37);
Vec embed(const Curve& curve, const PeriodData& pd, const CurvePoint& p, Real direction = 0.37);

// nearest lattice vector in the Z-span of the columns of 2 omega', 2 omega'';
// returns the reduced point and the integer coefficient vector (p, q)
std::pair<Vec, IntVec> reduce_lattice(const PeriodData& pd, const Vec& u);

struct InversionResult {
  Real residual22;        // |wp22 - (x1+x2)| / (1 + |x1| + |x2|)
  Real residual12;        // |wp12 + x1 x2| / (1 + |x1| + |x2|)  (corrected sign)
  Real residual12_printed;  // |wp12 - x1 x2| variant as printed
};
InversionResult verify_inversion(const Curve& curve, const PeriodData& pd,
                                 const SigmaContext& ctx, const DivisorPair& d);

}  // namespace kleinian
