#pragma once

#include <vector>

#include "kleinian/curve.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

// distance from point p to the segment [a,b]
Real point_segment_distance(Complex p, Complex a, Complex b);

// do the open segments [a,b] and [c,d] cross?
bool segments_cross(Complex a, Complex b, Complex c, Complex d);

// Waypoint polyline from `from` to `to` keeping distance >= margin from every
// obstacle (semicircular detours, deterministic side choice). Endpoints may
// coincide with an obstacle; clearance is enforced for the interior only.
std::vector<Complex> route_polyline(Complex from, Complex to, const Vec& obstacles, Real margin);

}  // namespace kleinian
