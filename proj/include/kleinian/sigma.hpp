#pragma once

#include <array>
#include <vector>

#include "kleinian/curve.hpp"
#include "kleinian/periods.hpp"
#include "kleinian/theta.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

// sigma(u) = gamma exp(-1/2 u^T kappa u) theta[chi]((2 omega')^{-1} u; tau),
// kappa = eta' omega'^{-1}. gamma is the constant making the addition formula
// hold; its square is pinned by probes and its sign by the normalization
// d sigma / d u_1 (0) = 1 (series leading term u_1 - u_2^3/3 + ...).
struct SigmaContext {
  Curve curve;
  PeriodData pd;
  Characteristic chi;
  Mat kappa;
  Mat inv_two_omega1;
  Complex gamma{1, 0};
  Complex gamma_sq{1, 0};
  ThetaConfig tcfg{};

  int genus() const { return curve.genus; }
};

// point on (the universal cover of) the Jacobian
struct JacPoint {
  Vec u;
};

// scaled derivative bundle: sigma^{(alpha)}(u) = exp(log_scale) * s[slot(alpha)]
struct SigmaJet {
  Complex log_scale;
  std::array<Complex, 15> s{};
  int order = 0;
};

SigmaJet sigma_jet(const SigmaContext& ctx, const Vec& u, int order);

Complex sigma(const SigmaContext& ctx, const Vec& u);
// alpha lists u-component indices (0-based, repeats allowed), |alpha| <= 4
Complex sigma_deriv(const SigmaContext& ctx, const Vec& u, const MultiIndex& alpha);
// log of sigma resp. of a first derivative entry; safe for large |u|
Complex log_sigma(const SigmaContext& ctx, const Vec& u);
Complex log_sigma_deriv1(const SigmaContext& ctx, const Vec& u, int component);

// wp_{ij} = -d_i d_j log sigma and its third/fourth derivatives, stored with
// index symmetry by construction
struct WpJet {
  int genus = 2;
  std::array<Complex, 3> d2{};  // 11, 12, 22
  std::array<Complex, 4> d3{};  // 111, 112, 122, 222
  std::array<Complex, 5> d4{};  // by count of index 2

  Complex wp(int i, int j) const { return d2[static_cast<std::size_t>(i + j)]; }
  Complex wp(int i, int j, int k) const { return d3[static_cast<std::size_t>(i + j + k)]; }
  Complex wp(int i, int j, int k, int l) const { return d4[static_cast<std::size_t>(i + j + k + l)]; }
};

// u is reduced modulo the period lattice internally; throws
// near_divisor_error when |sigma| < 1e-8 * scale
WpJet wp_jet(const SigmaContext& ctx, const Vec& u);

// Q(u,v) = -(wp11(u) - wp11(v) + wp12(u) wp22(v) - wp12(v) wp22(u)) and its
// u-partials with v held fixed
Complex q_fn(const SigmaContext& ctx, const Vec& u, const Vec& v);
Complex q_fn_deriv(const SigmaContext& ctx, const Vec& u, const Vec& v, int i);
Complex q_fn_deriv2(const SigmaContext& ctx, const Vec& u, const Vec& v, int i, int j);

struct QJet {
  Complex q;
  std::array<Complex, 2> qi{};
  std::array<Complex, 3> qij{};  // by count of index 2
};
QJet q_jet(const WpJet& at_u, const WpJet& at_v);

// selects among the odd half-integer characteristics the one whose sigma
// vanishes on the embedded curve (probe points supplied as Jacobian vectors)
Characteristic auto_select_characteristic(const Curve& curve, const PeriodData& pd,
                                          const std::vector<Vec>& probes);

// mean of sigma~(u+v) sigma~(u-v) / (sigma~(u)^2 sigma~(v)^2 Q(u,v)) over the
// probe pairs (sigma~ = gamma-free sigma); relative spread must stay below
// 1e-7. Stores gamma_sq in the context and returns it.
Complex calibrate_gamma(SigmaContext& ctx, const std::vector<std::pair<Vec, Vec>>& probes);

// full pipeline: periods (optional reuse), characteristic scan, gamma
SigmaContext build_sigma_context(const Curve& curve);
SigmaContext build_sigma_context(const Curve& curve, const PeriodData& pd);

// deterministic generic points for probes and tests: affine curve points away
// from branch points, plus their Abel images
std::vector<CurvePoint> probe_points(const Curve& curve, int count, std::uint64_t salt = 0);

}  // namespace kleinian
