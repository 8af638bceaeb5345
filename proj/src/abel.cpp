#include "kleinian/abel.hpp"

#include <cmath>

#include "kleinian/paths.hpp"
#include "kleinian/quadrature.hpp"
#include "kleinian/sigma.hpp"

namespace kleinian {

namespace {

// g(s) = s^{2(2g+1)} f(1/s^2) = 1 + lambda_{2g} s^2 + ... ; y = s^{-(2g+1)} sqrt(g)
Complex g_chart(const Curve& curve, Complex s) {
  const int deg = curve.degree();
  Complex acc(0, 0);
  const Complex s2 = s * s;
  // sum_k lambda_k s^{2(deg-k)}: Horner in s^2 visits lambda_0 (the highest
  // power of s) first
  for (int k = 0; k <= deg; ++k) {
    acc = acc * s2 + curve.lambdas(k);
  }
  return acc;
}

Real far_radius(const Curve& curve) {
  Real m = 0;
  const BranchData bd = branch_points(curve);
  for (Eigen::Index i = 0; i < bd.points.size(); ++i) m = std::max(m, std::abs(bd.points(i)));
  return 8.0 * (1.0 + m);
}

// integral of (du_1..du_g) over the s-chart ray 0 -> s_far; sqrt(g) tracked
// from sqrt(g(0)) = +1
std::pair<Vec, Complex> s_chart_leg(const Curve& curve, Complex s_far) {
  const int g = curve.genus;
  auto integrand = [&](const std::vector<Real>& ts) {
    std::vector<std::vector<Complex>> out(ts.size());
    Complex sq_prev(1, 0);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const Complex s = s_far * ts[i];
      Complex sq = std::sqrt(g_chart(curve, s));
      if (std::abs(-sq - sq_prev) < std::abs(sq - sq_prev)) sq = -sq;
      sq_prev = sq;
      // du_k = -s^{2(g-k)} ds / sqrt(g), k = 1..g (local parameter at infinity)
      std::vector<Complex> v(static_cast<std::size_t>(g));
      for (int k = 1; k <= g; ++k) {
        Complex sp(1, 0);
        for (int e = 0; e < 2 * (g - k); ++e) sp *= s;
        v[static_cast<std::size_t>(k - 1)] = -sp / sq * s_far;
      }
      out[i] = v;
    }
    return out;
  };
  const auto vals = integrate_gl_adaptive(integrand, g);
  // y at the chart end
  Complex sq(1, 0);
  const int steps = 64;
  for (int i = 1; i <= steps; ++i) {
    const Complex s = s_far * (static_cast<Real>(i) / steps);
    Complex w = std::sqrt(g_chart(curve, s));
    if (std::abs(-w - sq) < std::abs(w - sq)) w = -w;
    sq = w;
  }
  Complex y_far = sq;
  Complex spow(1, 0);
  for (int e = 0; e < 2 * g + 1; ++e) spow *= s_far;
  y_far /= spow;
  Vec u(g);
  for (int k = 0; k < g; ++k) u(k) = vals[static_cast<std::size_t>(k)];
  return {u, y_far};
}

}  // namespace

Vec embed(const Curve& curve, const PeriodData& pd, const CurvePoint& p, Real direction) {
  (void)pd;  // part of the map's signature; the route itself is period-free
  const int g = curve.genus;
  if (p.is_infinity()) return Vec::Zero(g);
  if (!on_curve(curve, p)) throw error("embed: point is not on the curve");

  const BranchData bd = branch_points(curve);
  Real clearance = 1e300;
  for (Eigen::Index i = 0; i < bd.points.size(); ++i) {
    clearance = std::min(clearance, std::abs(p.x - bd.points(i)));
  }
  if (clearance < 1e-6) throw path_near_branch_error("target point too close to a branch point");

  const Real R = far_radius(curve);
  const bool far_target = std::abs(p.x) > R;
  const Complex x_far = far_target ? p.x : R * std::exp(kI * direction);
  const Complex s_far = 1.0 / std::sqrt(x_far);

  auto [u, y_far] = s_chart_leg(curve, s_far);
  Complex y_end = y_far;

  if (!far_target) {
    Real margin = 1e300;
    for (Eigen::Index i = 0; i < bd.points.size(); ++i)
      for (Eigen::Index j = i + 1; j < bd.points.size(); ++j)
        margin = std::min(margin, std::abs(bd.points(i) - bd.points(j)));
    margin = std::min(0.25 * margin, 0.5 * clearance);
    const auto waypoints = route_polyline(x_far, p.x, bd.points, margin);
    for (std::size_t leg = 0; leg + 1 < waypoints.size(); ++leg) {
      const Complex a = waypoints[leg];
      const Complex b = waypoints[leg + 1];
      const Complex y_leg = y_end;
      auto integrand = [&](const std::vector<Real>& ts) {
        std::vector<std::vector<Complex>> out(ts.size());
        Complex yy = y_leg;
        Complex prev = a;
        for (std::size_t i = 0; i < ts.size(); ++i) {
          const Complex x = a + (b - a) * ts[i];
          yy = continue_y_segment(curve, prev, x, yy);
          prev = x;
          std::vector<Complex> v(static_cast<std::size_t>(g));
          Complex xp(1, 0);
          for (int k = 0; k < g; ++k) {
            v[static_cast<std::size_t>(k)] = xp / (2.0 * yy) * (b - a);
            xp *= x;
          }
          out[i] = v;
        }
        return out;
      };
      const auto vals = integrate_gl_adaptive(integrand, g);
      for (int k = 0; k < g; ++k) u(k) += vals[static_cast<std::size_t>(k)];
      y_end = continue_y_segment(curve, a, b, y_end);
    }
  }

  // land on the requested sheet; the involuted route gives the negative
  const Real dp = std::abs(y_end - p.y);
  const Real dm = std::abs(y_end + p.y);
  if (std::abs(dp - dm) <= 1e-10 * std::max(dp, dm)) {
    throw path_near_branch_error("sheet match ambiguous at path end");
  }
  if (dp > dm) u = -u;
  return u;
}

Vec abel(const Curve& curve, const PeriodData& pd, const DivisorPair& d, Real direction) {
  return embed(curve, pd, d.p1, direction) + embed(curve, pd, d.p2, direction);
}

std::pair<Vec, IntVec> reduce_lattice(const PeriodData& pd, const Vec& u) {
  const int g = pd.genus;
  RealMat P(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      P(i, j) = 2.0 * pd.omega1(i, j).real();
      P(g + i, j) = 2.0 * pd.omega1(i, j).imag();
      P(i, g + j) = 2.0 * pd.omega2(i, j).real();
      P(g + i, g + j) = 2.0 * pd.omega2(i, j).imag();
    }
  }
  RealVec rhs(2 * g);
  for (int i = 0; i < g; ++i) {
    rhs(i) = u(i).real();
    rhs(g + i) = u(i).imag();
  }
  const RealVec t = P.partialPivLu().solve(rhs);
  IntVec shifts(2 * g);
  for (int i = 0; i < 2 * g; ++i) shifts(i) = static_cast<int>(std::floor(t(i) + 0.5));
  Vec red = u;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      red(i) -= 2.0 * pd.omega1(i, j) * static_cast<Real>(shifts(j));
      red(i) -= 2.0 * pd.omega2(i, j) * static_cast<Real>(shifts(g + j));
    }
  }
  return {red, shifts};
}

InversionResult verify_inversion(const Curve& curve, const PeriodData& pd,
                                 const SigmaContext& ctx, const DivisorPair& d) {
  if (d.p1.is_infinity() || d.p2.is_infinity()) {
    throw degenerate_point_error("inversion needs two affine points");
  }
  if (std::abs(d.p1.x - d.p2.x) < 1e-6) {
    throw near_divisor_error("inversion divisor is near-degenerate (x1 ~ x2)");
  }
  const Vec u = abel(curve, pd, d);
  const WpJet jet = wp_jet(ctx, u);
  const Complex x1 = d.p1.x, x2 = d.p2.x;
  const Real scale = 1.0 + std::abs(x1) + std::abs(x2);
  InversionResult r{};
  r.residual22 = std::abs(jet.wp(1, 1) - (x1 + x2)) / scale;
  r.residual12 = std::abs(jet.wp(0, 1) + x1 * x2) / scale;
  r.residual12_printed = std::abs(jet.wp(0, 1) - x1 * x2) / scale;
  return r;
}

}  // namespace kleinian
