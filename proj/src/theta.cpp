#include "kleinian/theta.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace kleinian {

const std::array<MultiIndex, 15> kMultiIndexTable = {{
    {},
    {0}, {1},
    {0, 0}, {0, 1}, {1, 1},
    {0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {1, 1, 1},
    {0, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 1}, {0, 1, 1, 1}, {1, 1, 1, 1},
}};

namespace {
constexpr int kOrderOffset[5] = {0, 1, 3, 6, 10};
}

int multi_index_slot(const MultiIndex& sorted_alpha) {
  const int o = static_cast<int>(sorted_alpha.size());
  int ones = 0;
  for (int v : sorted_alpha) ones += (v == 1) ? 1 : 0;
  return kOrderOffset[o] + ones;
}

std::vector<Characteristic> odd_characteristics(int g) {
  std::vector<Characteristic> out;
  const int lim = 1 << g;
  for (int am = 0; am < lim; ++am) {
    for (int bm = 0; bm < lim; ++bm) {
      Characteristic chi;
      chi.a2 = IntVec::Zero(g);
      chi.b2 = IntVec::Zero(g);
      for (int i = 0; i < g; ++i) {
        chi.a2(i) = (am >> i) & 1;
        chi.b2(i) = (bm >> i) & 1;
      }
      if (chi.parity() == 1) out.push_back(chi);
    }
  }
  return out;
}

std::array<Complex, 15> theta_derivative_sums(const Vec& z, const Mat& tau,
                                              const Characteristic& chi, int order,
                                              const ThetaConfig& cfg) {
  const int g = static_cast<int>(z.size());
  const Vec a = chi.a();
  const Vec b = chi.b();

  const RealMat Y = 0.5 * (tau.imag() + tau.imag().transpose());
  Eigen::SelfAdjointEigenSolver<RealMat> es(Y);
  const Real mu = es.eigenvalues().minCoeff();
  if (!(mu > 0)) throw error("Im tau must be positive definite");

  const RealVec yv = z.imag();
  const RealVec center = Y.llt().solve(-yv);  // continuous maximum of |term|

  Real center_norm = center.norm() + a.norm() + 1.0;
  Real radius = 1.0;
  const Real log_eps = std::log(cfg.eps);
  while (radius < cfg.radius_cap) {
    const Real log_bound = -kPi * mu * radius * radius +
                           (order + 1) * std::log1p(2.0 * kPi * (radius + center_norm)) +
                           g * std::log(2.0 * (radius + center_norm) + 3.0);
    if (log_bound < log_eps) break;
    radius += 1.0;
  }
  if (radius >= cfg.radius_cap) throw radius_cap_error("theta truncation radius exceeds cap");

  std::array<Complex, 15> sums{};
  const int slots = kOrderOffset[order] + order + 1;

  IntVec lo(g), hi(g);
  for (int i = 0; i < g; ++i) {
    lo(i) = static_cast<int>(std::floor(center(i) - a(i).real() - radius - 1));
    hi(i) = static_cast<int>(std::ceil(center(i) - a(i).real() + radius + 1));
  }
  const Real r_cut2 = (radius + 1.0) * (radius + 1.0);

  Vec p(g);
  const int n2_lo = (g == 2) ? lo(1) : 0;
  const int n2_hi = (g == 2) ? hi(1) : 0;
  for (int n1 = lo(0); n1 <= hi(0); ++n1) {
    for (int n2 = n2_lo; n2 <= n2_hi; ++n2) {
      p(0) = Complex(n1, 0) + a(0);
      if (g == 2) p(1) = Complex(n2, 0) + a(1);
      Real d2 = 0;
      for (int i = 0; i < g; ++i) {
        const Real d = p(i).real() - center(i);
        d2 += d * d;
      }
      if (d2 > r_cut2) continue;
      Complex expo(0, 0);
      for (int i = 0; i < g; ++i) {
        Complex acc(0, 0);
        for (int j = 0; j < g; ++j) acc += tau(i, j) * p(j);
        expo += p(i) * (0.5 * acc + z(i) + b(i));
      }
      const Complex term = std::exp(2.0 * kPi * kI * expo);
      const Complex f0 = 2.0 * kPi * kI * p(0);
      const Complex f1 = (g == 2) ? 2.0 * kPi * kI * p(1) : Complex(0, 0);
      Complex fpow[5][5];  // fpow[i][j] = f0^i * f1^j for i+j<=4
      fpow[0][0] = Complex(1, 0);
      for (int i = 1; i <= 4; ++i) fpow[i][0] = fpow[i - 1][0] * f0;
      for (int j = 1; j <= 4; ++j) fpow[0][j] = fpow[0][j - 1] * f1;
      for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4 - i; ++j) fpow[i][j] = fpow[i][0] * fpow[0][j];
      for (int s = 0; s < slots && s < 15; ++s) {
        const MultiIndex& alpha = kMultiIndexTable[static_cast<std::size_t>(s)];
        int ones = 0;
        for (int v : alpha) ones += (v == 1);
        const int zeros = static_cast<int>(alpha.size()) - ones;
        if (g == 1 && ones > 0) continue;
        sums[static_cast<std::size_t>(s)] += term * fpow[zeros][ones];
      }
    }
  }
  return sums;
}

Complex theta(const Vec& z, const Mat& tau, const Characteristic& chi, const ThetaConfig& cfg) {
  return theta_derivative_sums(z, tau, chi, 0, cfg)[0];
}

Complex theta_deriv(const Vec& z, const Mat& tau, const Characteristic& chi,
                    const MultiIndex& alpha, const ThetaConfig& cfg) {
  MultiIndex s = alpha;
  std::sort(s.begin(), s.end());
  const int order = static_cast<int>(s.size());
  if (order > 4) throw error("theta derivatives supported up to order 4");
  return theta_derivative_sums(z, tau, chi, order, cfg)[static_cast<std::size_t>(multi_index_slot(s))];
}

ReducedArgument reduce_argument(const Vec& z, const Mat& tau, const Characteristic& chi) {
  const int g = static_cast<int>(z.size());
  const RealMat Y = 0.5 * (tau.imag() + tau.imag().transpose());
  const RealVec t = Y.llt().solve(z.imag());
  ReducedArgument out;
  out.mp = IntVec(g);
  for (int i = 0; i < g; ++i) out.mp(i) = static_cast<int>(std::floor(t(i) + 0.5));
  Vec zr = z - tau * out.mp.cast<Real>().cast<Complex>();
  out.m = IntVec(g);
  for (int i = 0; i < g; ++i) out.m(i) = static_cast<int>(std::floor(zr(i).real() + 0.5));
  zr -= out.m.cast<Real>().cast<Complex>();
  out.z_red = zr;

  const Vec a = chi.a();
  const Vec b = chi.b();
  Complex am(0, 0), quad(0, 0), lin(0, 0);
  for (int i = 0; i < g; ++i) {
    am += a(i) * static_cast<Real>(out.m(i));
    lin += static_cast<Real>(out.mp(i)) * (zr(i) + b(i));
    for (int j = 0; j < g; ++j) {
      quad += 0.5 * static_cast<Real>(out.mp(i)) * tau(i, j) * static_cast<Real>(out.mp(j));
    }
  }
  out.log_prefactor = 2.0 * kPi * kI * (am - quad - lin);
  return out;
}

}  // namespace kleinian
