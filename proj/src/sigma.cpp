#include "kleinian/sigma.hpp"

#include <algorithm>
#include <cmath>

#include "kleinian/abel.hpp"

namespace kleinian {

namespace {

// subsets of the positions of a multi-index, as bitmasks
inline MultiIndex subset_of(const MultiIndex& alpha, unsigned mask, bool complement) {
  MultiIndex out;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const bool in = (mask >> i) & 1u;
    if (in != complement) out.push_back(alpha[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SigmaJet sigma_jet(const SigmaContext& ctx, const Vec& u, int order) {
  const int g = ctx.genus();
  const Vec v = ctx.inv_two_omega1 * u;
  const ReducedArgument red = reduce_argument(v, ctx.pd.tau, ctx.chi);
  const auto th = theta_derivative_sums(red.z_red, ctx.pd.tau, ctx.chi, order, ctx.tcfg);

  // prefactor gradient of the reduction identity, d(log pref)/dv = -2 pi i m'
  Vec sh(g);
  for (int i = 0; i < g; ++i) sh(i) = -2.0 * kPi * kI * static_cast<Real>(red.mp(i));

  const int slots = (order >= 0 && order <= 4) ? std::array<int, 5>{1, 3, 6, 10, 15}[static_cast<std::size_t>(order)] : 15;

  // theta derivatives at the unreduced argument (up to the common exp factor):
  // Tv[alpha] = sum over position subsets beta of alpha:
  //             (prod_{i not in beta} sh_{alpha_i}) * theta^{(beta)}(z_red)
  std::array<Complex, 15> Tv{};
  for (int s = 0; s < slots; ++s) {
    const MultiIndex& alpha = kMultiIndexTable[static_cast<std::size_t>(s)];
    if (g == 1 && std::count(alpha.begin(), alpha.end(), 1) > 0) continue;
    const unsigned n = static_cast<unsigned>(alpha.size());
    Complex acc(0, 0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      Complex coef(1, 0);
      for (unsigned i = 0; i < n; ++i) {
        if (!((mask >> i) & 1u)) coef *= sh(alpha[i]);
      }
      const MultiIndex beta = subset_of(alpha, mask, false);
      acc += coef * th[static_cast<std::size_t>(multi_index_slot(beta))];
    }
    Tv[static_cast<std::size_t>(s)] = acc;
  }

  // chain rule to u derivatives: d/du_mu = sum_k B_{k,mu} d/dv_k
  const Mat& B = ctx.inv_two_omega1;
  std::array<Complex, 15> Tu{};
  for (int s = 0; s < slots; ++s) {
    const MultiIndex& alpha = kMultiIndexTable[static_cast<std::size_t>(s)];
    if (g == 1 && std::count(alpha.begin(), alpha.end(), 1) > 0) continue;
    const int n = static_cast<int>(alpha.size());
    Complex acc(0, 0);
    const int combos = 1 << n;  // g == 2; for g == 1 only ks == 0
    const int lim = (g == 2) ? combos : 1;
    for (int ks = 0; ks < lim; ++ks) {
      Complex coef(1, 0);
      MultiIndex kk(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        const int k = (ks >> i) & 1;
        kk[static_cast<std::size_t>(i)] = k;
        coef *= B(k, alpha[static_cast<std::size_t>(i)]);
      }
      std::sort(kk.begin(), kk.end());
      acc += coef * Tv[static_cast<std::size_t>(multi_index_slot(kk))];
    }
    Tu[static_cast<std::size_t>(s)] = acc;
  }

  // exponential prefactor E = exp(-1/2 u^T kappa u): first cumulant e1 = -kappa u,
  // second cumulant e2 = -kappa, higher vanish
  Vec e1 = -(ctx.kappa * u);
  auto e2 = [&](int i, int j) { return -ctx.kappa(i, j); };
  auto Ederiv = [&](const MultiIndex& beta) -> Complex {
    switch (beta.size()) {
      case 0: return Complex(1, 0);
      case 1: return e1(beta[0]);
      case 2: return e1(beta[0]) * e1(beta[1]) + e2(beta[0], beta[1]);
      case 3: {
        const int i = beta[0], j = beta[1], k = beta[2];
        return e1(i) * e1(j) * e1(k) + e2(i, j) * e1(k) + e2(i, k) * e1(j) + e2(j, k) * e1(i);
      }
      default: {
        const int i = beta[0], j = beta[1], k = beta[2], l = beta[3];
        return e1(i) * e1(j) * e1(k) * e1(l) + e2(i, j) * e1(k) * e1(l) +
               e2(i, k) * e1(j) * e1(l) + e2(i, l) * e1(j) * e1(k) + e2(j, k) * e1(i) * e1(l) +
               e2(j, l) * e1(i) * e1(k) + e2(k, l) * e1(i) * e1(j) + e2(i, j) * e2(k, l) +
               e2(i, k) * e2(j, l) + e2(i, l) * e2(j, k);
      }
    }
  };

  SigmaJet jet;
  jet.order = order;
  for (int s = 0; s < slots; ++s) {
    const MultiIndex& alpha = kMultiIndexTable[static_cast<std::size_t>(s)];
    if (g == 1 && std::count(alpha.begin(), alpha.end(), 1) > 0) continue;
    const unsigned n = static_cast<unsigned>(alpha.size());
    Complex acc(0, 0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      const MultiIndex beta = subset_of(alpha, mask, false);
      const MultiIndex rest = subset_of(alpha, mask, true);
      acc += Ederiv(beta) * Tu[static_cast<std::size_t>(multi_index_slot(rest))];
    }
    jet.s[static_cast<std::size_t>(s)] = acc;
  }

  Complex quad(0, 0);
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) quad += u(i) * ctx.kappa(i, j) * u(j);
  jet.log_scale = std::log(ctx.gamma) - 0.5 * quad + red.log_prefactor;
  return jet;
}

Complex sigma(const SigmaContext& ctx, const Vec& u) {
  const SigmaJet jet = sigma_jet(ctx, u, 0);
  return std::exp(jet.log_scale) * jet.s[0];
}

Complex sigma_deriv(const SigmaContext& ctx, const Vec& u, const MultiIndex& alpha) {
  MultiIndex a = alpha;
  std::sort(a.begin(), a.end());
  const SigmaJet jet = sigma_jet(ctx, u, static_cast<int>(a.size()));
  return std::exp(jet.log_scale) * jet.s[static_cast<std::size_t>(multi_index_slot(a))];
}

Complex log_sigma(const SigmaContext& ctx, const Vec& u) {
  const SigmaJet jet = sigma_jet(ctx, u, 0);
  return jet.log_scale + std::log(jet.s[0]);
}

Complex log_sigma_deriv1(const SigmaContext& ctx, const Vec& u, int component) {
  const SigmaJet jet = sigma_jet(ctx, u, 1);
  return jet.log_scale + std::log(jet.s[static_cast<std::size_t>(1 + component)]);
}

WpJet wp_jet(const SigmaContext& ctx, const Vec& u) {
  const int g = ctx.genus();
  const Vec ur = reduce_lattice(ctx.pd, u).first;
  const SigmaJet jet = sigma_jet(ctx, ur, 4);

  Real scale = 1.0;
  for (int s = 1; s < ((g == 2) ? 3 : 2); ++s) {
    scale = std::max(scale, std::abs(jet.s[static_cast<std::size_t>(s)]));
  }
  if (std::abs(jet.s[0]) < tol::near_divisor * scale) {
    throw near_divisor_error("wp jet requested too close to the theta divisor");
  }

  const Complex s0 = jet.s[0];
  auto sd = [&](MultiIndex idx) -> Complex {
    std::sort(idx.begin(), idx.end());
    return jet.s[static_cast<std::size_t>(multi_index_slot(idx))] / s0;
  };

  WpJet out;
  out.genus = g;
  auto set2 = [&](int i, int j) {
    out.d2[static_cast<std::size_t>(i + j)] = -(sd({i, j}) - sd({i}) * sd({j}));
  };
  auto set3 = [&](int i, int j, int k) {
    out.d3[static_cast<std::size_t>(i + j + k)] =
        -(sd({i, j, k}) - sd({i, j}) * sd({k}) - sd({i, k}) * sd({j}) - sd({j, k}) * sd({i}) +
          2.0 * sd({i}) * sd({j}) * sd({k}));
  };
  auto set4 = [&](int i, int j, int k, int l) {
    const Complex t =
        sd({i, j, k, l}) -
        (sd({i, j, k}) * sd({l}) + sd({i, j, l}) * sd({k}) + sd({i, k, l}) * sd({j}) +
         sd({j, k, l}) * sd({i})) -
        (sd({i, j}) * sd({k, l}) + sd({i, k}) * sd({j, l}) + sd({i, l}) * sd({j, k})) +
        2.0 * (sd({i, j}) * sd({k}) * sd({l}) + sd({i, k}) * sd({j}) * sd({l}) +
               sd({i, l}) * sd({j}) * sd({k}) + sd({j, k}) * sd({i}) * sd({l}) +
               sd({j, l}) * sd({i}) * sd({k}) + sd({k, l}) * sd({i}) * sd({j})) -
        6.0 * sd({i}) * sd({j}) * sd({k}) * sd({l});
    out.d4[static_cast<std::size_t>(i + j + k + l)] = -t;
  };
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j) set2(i, j);
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j)
      for (int k = j; k < g; ++k) set3(i, j, k);
  for (int i = 0; i < g; ++i)
    for (int j = i; j < g; ++j)
      for (int k = j; k < g; ++k)
        for (int l = k; l < g; ++l) set4(i, j, k, l);
  return out;
}

QJet q_jet(const WpJet& wu, const WpJet& wv) {
  QJet q;
  q.q = -(wu.wp(0, 0) - wv.wp(0, 0) + wu.wp(0, 1) * wv.wp(1, 1) - wv.wp(0, 1) * wu.wp(1, 1));
  for (int i = 0; i < 2; ++i) {
    q.qi[static_cast<std::size_t>(i)] =
        -(wu.wp(0, 0, i) + wu.wp(0, 1, i) * wv.wp(1, 1) - wv.wp(0, 1) * wu.wp(1, 1, i));
  }
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      q.qij[static_cast<std::size_t>(i + j)] =
          -(wu.wp(0, 0, i, j) + wu.wp(0, 1, i, j) * wv.wp(1, 1) - wv.wp(0, 1) * wu.wp(1, 1, i, j));
    }
  }
  return q;
}

Complex q_fn(const SigmaContext& ctx, const Vec& u, const Vec& v) {
  return q_jet(wp_jet(ctx, u), wp_jet(ctx, v)).q;
}
Complex q_fn_deriv(const SigmaContext& ctx, const Vec& u, const Vec& v, int i) {
  return q_jet(wp_jet(ctx, u), wp_jet(ctx, v)).qi[static_cast<std::size_t>(i)];
}
Complex q_fn_deriv2(const SigmaContext& ctx, const Vec& u, const Vec& v, int i, int j) {
  return q_jet(wp_jet(ctx, u), wp_jet(ctx, v)).qij[static_cast<std::size_t>(i + j)];
}

std::vector<CurvePoint> probe_points(const Curve& curve, int count, std::uint64_t salt) {
  const BranchData bd = branch_points(curve);
  Real r = 0;
  for (Eigen::Index i = 0; i < bd.points.size(); ++i) r = std::max(r, std::abs(bd.points(i)));
  std::vector<CurvePoint> out;
  // deterministic spiral of candidates; keep the ones clear of branch points
  for (int k = 0; out.size() < static_cast<std::size_t>(count) && k < 4000; ++k) {
    const Real angle = 0.7 + 2.39996322972865332 * (k + static_cast<Real>(salt % 97));
    const Real radius = (0.35 + 0.23 * ((k + static_cast<int>(salt % 13)) % 9)) * (1.0 + r);
    const Complex x = radius * std::exp(kI * angle);
    bool ok = true;
    for (Eigen::Index i = 0; i < bd.points.size(); ++i) {
      if (std::abs(x - bd.points(i)) < 0.3) { ok = false; break; }
    }
    if (!ok) continue;
    out.push_back(lift_point(curve, x));
  }
  if (out.size() < static_cast<std::size_t>(count)) throw error("probe sampling failed");
  return out;
}

Characteristic auto_select_characteristic(const Curve& curve, const PeriodData& pd,
                                          const std::vector<Vec>& probes) {
  // genus 1: the theta divisor is the single point 0, not the Abel image of
  // the curve, and there is exactly one odd characteristic
  if (curve.genus == 1) return odd_characteristics(1).front();

  SigmaContext tmp;
  tmp.curve = curve;
  tmp.pd = pd;
  tmp.kappa = pd.omega1.transpose().partialPivLu().solve(pd.eta1.transpose()).transpose();
  tmp.inv_two_omega1 = (2.0 * pd.omega1).partialPivLu().inverse();
  tmp.gamma = Complex(1, 0);

  Real scale = 1.0;
  Real best = 1e300;
  Characteristic winner;
  for (const Characteristic& chi : odd_characteristics(curve.genus)) {
    tmp.chi = chi;
    Real worst = 0;
    for (const Vec& u : probes) {
      worst = std::max(worst, std::abs(sigma(tmp, u)));
    }
    scale = std::max(scale, worst);
    if (worst < best) {
      best = worst;
      winner = chi;
    }
  }
  if (!(best < tol::divisor_probe * scale)) {
    throw no_vanishing_characteristic_error("no odd characteristic vanishes on the embedded curve");
  }
  return winner;
}

Complex calibrate_gamma(SigmaContext& ctx, const std::vector<std::pair<Vec, Vec>>& probes) {
  if (probes.empty()) throw inconsistent_gamma_error("no calibration probes");
  SigmaContext free = ctx;
  free.gamma = Complex(1, 0);
  std::vector<Complex> samples;
  for (const auto& [u, v] : probes) {
    const Complex num = log_sigma(free, u + v) + log_sigma(free, u - v) - 2.0 * log_sigma(free, u) -
                        2.0 * log_sigma(free, v);
    const Complex q = q_fn(free, u, v);
    samples.push_back(std::exp(num) / q);
  }
  Complex mean(0, 0);
  for (const Complex& s : samples) mean += s;
  mean /= static_cast<Real>(samples.size());
  Real spread = 0;
  for (const Complex& s : samples) spread = std::max(spread, std::abs(s - mean) / std::abs(mean));
  if (!(spread < tol::gamma_spread)) {
    throw inconsistent_gamma_error("gamma^2 probe spread exceeds 1e-7");
  }
  ctx.gamma_sq = mean;
  ctx.pd.gamma_sq = mean;
  return mean;
}

SigmaContext build_sigma_context(const Curve& curve, const PeriodData& pd) {
  SigmaContext ctx;
  ctx.curve = curve;
  ctx.pd = pd;
  // kappa = eta' omega'^{-1}; symmetric by the bilinear relations
  ctx.kappa = pd.omega1.transpose().partialPivLu().solve(pd.eta1.transpose()).transpose();
  const Real asym = (ctx.kappa - ctx.kappa.transpose()).cwiseAbs().maxCoeff();
  if (!(asym < tol::kappa_symmetry * (1.0 + ctx.kappa.cwiseAbs().maxCoeff()))) {
    throw ill_conditioned_error("kappa = eta' omega'^{-1} is not symmetric");
  }
  ctx.inv_two_omega1 = (2.0 * pd.omega1).partialPivLu().inverse();
  ctx.gamma = Complex(1, 0);

  const int n_probe = 5;
  const auto pts = probe_points(curve, n_probe + 4);
  std::vector<Vec> probe_u;
  for (int i = 0; i < n_probe; ++i) probe_u.push_back(embed(curve, pd, pts[static_cast<std::size_t>(i)]));
  ctx.chi = auto_select_characteristic(curve, pd, probe_u);

  // normalize the leading series coefficient: d sigma / d u_1 (0) = 1
  const Vec zero = Vec::Zero(curve.genus);
  const Complex s1 = sigma_deriv(ctx, zero, {0});
  if (std::abs(s1) == 0.0) throw inconsistent_gamma_error("sigma gradient vanishes at 0");
  ctx.gamma = 1.0 / s1;

  // pin gamma^2 from the addition formula on disjoint probe pairs
  std::vector<std::pair<Vec, Vec>> pairs;
  const Vec e5 = embed(curve, pd, pts[static_cast<std::size_t>(n_probe)]);
  const Vec e6 = embed(curve, pd, pts[static_cast<std::size_t>(n_probe + 1)]);
  const Vec e7 = embed(curve, pd, pts[static_cast<std::size_t>(n_probe + 2)]);
  const Vec e8 = embed(curve, pd, pts[static_cast<std::size_t>(n_probe + 3)]);
  pairs.emplace_back(e5 + e6, e7 + e8);
  pairs.emplace_back(e5 + e7, e6 + e8);
  pairs.emplace_back(e5 + e8, e6 + e7);
  calibrate_gamma(ctx, pairs);

  // the sign-resolved gamma must square to the calibrated gamma^2
  if (std::abs(ctx.gamma * ctx.gamma - ctx.gamma_sq) >
      1e-6 * std::abs(ctx.gamma_sq)) {
    throw inconsistent_gamma_error("series normalization disagrees with addition-formula gamma^2");
  }
  return ctx;
}

SigmaContext build_sigma_context(const Curve& curve) {
  return build_sigma_context(curve, compute_periods(curve));
}

}  // namespace kleinian
