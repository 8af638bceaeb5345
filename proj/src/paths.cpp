#include "kleinian/paths.hpp"

#include <algorithm>
#include <cmath>

namespace kleinian {

Real point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const Real len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  Real t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

namespace {
Real cross(Complex o, Complex a, Complex b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}
}  // namespace

bool segments_cross(Complex a, Complex b, Complex c, Complex d) {
  const Real d1 = cross(c, d, a);
  const Real d2 = cross(c, d, b);
  const Real d3 = cross(a, b, c);
  const Real d4 = cross(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

namespace {

// index of the first obstacle whose distance to the open leg (from, to) is
// below margin, measured by the projection parameter along the leg
int first_offender(Complex from, Complex to, const Vec& obstacles, Real margin, Real& t_out) {
  int idx = -1;
  Real best_t = 2.0;
  const Complex ab = to - from;
  const Real len2 = std::norm(ab);
  if (len2 == 0.0) return -1;
  for (Eigen::Index i = 0; i < obstacles.size(); ++i) {
    const Complex ob = obstacles(i);
    if (std::abs(ob - from) < 1e-12 || std::abs(ob - to) < 1e-12) continue;
    if (point_segment_distance(ob, from, to) >= margin) continue;
    const Real t = ((ob - from) * std::conj(ab)).real() / len2;
    if (t > 1e-9 && t < 1.0 - 1e-9 && t < best_t) {
      best_t = t;
      idx = static_cast<int>(i);
    }
  }
  t_out = best_t;
  return idx;
}

}  // namespace

std::vector<Complex> route_polyline(Complex from, Complex to, const Vec& obstacles, Real margin) {
  // worklist of pending targets; when the leg to the next target passes an
  // obstacle, three bump waypoints are prepended. The budget keeps the walk
  // finite for adversarial geometry.
  std::vector<Complex> out{from};
  std::vector<Complex> pending{to};
  Complex cur = from;
  int budget = 256;
  while (!pending.empty()) {
    if (--budget <= 0) throw path_near_branch_error("path routing budget exhausted");
    const Complex target = pending.back();
    Real t = 0;
    const int idx = first_offender(cur, target, obstacles, margin, t);
    if (idx < 0) {
      out.push_back(target);
      cur = target;
      pending.pop_back();
      continue;
    }
    const Complex ob = obstacles(idx);
    const Complex ab = target - cur;
    const Complex foot = cur + std::clamp(t, 0.0, 1.0) * ab;
    Complex normal = foot - ob;
    const Complex tang = ab / std::abs(ab);
    if (std::abs(normal) < 1e-13) {
      normal = kI * tang;  // obstacle on the line: fixed side
    } else {
      normal /= std::abs(normal);
    }
    const Real radius = 1.5 * margin;
    // pending is processed back-to-front
    pending.push_back(ob + normal * radius + tang * radius);
    pending.push_back(ob + normal * radius);
    pending.push_back(ob + normal * radius - tang * radius);
  }
  return out;
}

}  // namespace kleinian
