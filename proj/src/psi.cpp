#include "kleinian/psi.hpp"

#include <cmath>

namespace kleinian {

Complex PsiSequence::value(int n) const {
  if (n < 0) return -value(-n);
  if (is_zero[static_cast<std::size_t>(n)]) return Complex(0, 0);
  return std::exp(log_values[static_cast<std::size_t>(n)]);
}

Complex PsiSequence::log_value(int n) const {
  if (n < 0 || is_zero[static_cast<std::size_t>(n)]) {
    throw error("log of a vanishing psi entry");
  }
  return log_values[static_cast<std::size_t>(n)];
}

namespace {

PsiSequence build_sequence(const SigmaContext& ctx, const Vec& u, int max_n,
                           PsiSequence::Flavor flavor, Complex log_denominator,
                           bool zero_at_01) {
  PsiSequence seq;
  seq.flavor = flavor;
  seq.u = u;
  seq.max_n = max_n;
  seq.log_values.assign(static_cast<std::size_t>(max_n) + 1, Complex(0, 0));
  seq.is_zero.assign(static_cast<std::size_t>(max_n) + 1, false);
  seq.is_zero[0] = true;
  for (int n = 1; n <= max_n; ++n) {
    if (n == 1 && zero_at_01) {
      seq.is_zero[1] = true;
      continue;
    }
    const Complex ls = log_sigma(ctx, static_cast<Real>(n) * u);
    seq.log_values[static_cast<std::size_t>(n)] =
        ls - static_cast<Real>(n) * static_cast<Real>(n) * log_denominator;
  }
  return seq;
}

}  // namespace

PsiSequence psi_sequence_g2(const SigmaContext& ctx, const CurvePoint& p, int max_n) {
  if (p.is_infinity() || std::abs(p.y) < 1e-8) {
    throw degenerate_point_error("psi needs a generic affine point (y != 0)");
  }
  const Vec u = embed(ctx.curve, ctx.pd, p);
  // sigma_2(u) must be usable as a denominator
  const SigmaJet jet = sigma_jet(ctx, u, 1);
  const Real scale = std::max(1.0, std::abs(jet.s[1]));
  if (std::abs(jet.s[2]) < 1e-8 * scale) {
    throw degenerate_point_error("sigma_2 vanishes at the embedded point");
  }
  const Complex log_s2 = jet.log_scale + std::log(jet.s[2]);
  PsiSequence seq = build_sequence(ctx, u, max_n, PsiSequence::Flavor::psi_on_curve, log_s2, true);
  seq.base = p;
  return seq;
}

PsiSequence psi_sequence_g2_jacobian(const SigmaContext& ctx, const Vec& u, int max_n) {
  const SigmaJet jet = sigma_jet(ctx, u, 1);
  if (std::abs(jet.s[2]) == 0.0) throw degenerate_point_error("sigma_2 vanishes");
  const Complex log_s2 = jet.log_scale + std::log(jet.s[2]);
  return build_sequence(ctx, u, max_n, PsiSequence::Flavor::psi_on_jacobian, log_s2, false);
}

PsiSequence psi_sequence_elliptic(const SigmaContext& ctx, const Vec& u, int max_n) {
  const Vec red = reduce_lattice(ctx.pd, u).first;
  if (red.norm() < 1e-6) throw near_lattice_error("point too close to the period lattice");
  const Complex ls = log_sigma(ctx, u);
  return build_sequence(ctx, u, max_n, PsiSequence::Flavor::elliptic, ls, false);
}

PsiSequence phi_sequence(const SigmaContext& ctx, const Vec& u, int max_n) {
  const Complex ls = log_sigma(ctx, u);
  return build_sequence(ctx, u, max_n, PsiSequence::Flavor::phi_on_jacobian, ls, false);
}

Complex psi_g2(const SigmaContext& ctx, const CurvePoint& p, int n) {
  if (n < 0) return -psi_g2(ctx, p, -n);
  return psi_sequence_g2(ctx, p, std::max(n, 1)).value(n);
}

namespace {

// signed monomial in log space: sign * exp(log)
struct LogMonomial {
  Complex log{0, 0};
  Real sign = 1;
  bool zero = false;
};

LogMonomial monomial(const PsiSequence& seq, std::initializer_list<int> indices) {
  LogMonomial m;
  for (int n : indices) {
    const int a = n < 0 ? -n : n;
    if (seq.zero(a)) {
      m.zero = true;
      return m;
    }
    if (n < 0) m.sign = -m.sign;
    m.log += seq.log_value(a);
  }
  return m;
}

// relative residual of  sum_i c_i * M_i = 0  with monomials in log space
Real log_space_residual(const std::vector<std::pair<Real, LogMonomial>>& terms) {
  Real max_re = -1e300;
  bool any = false;
  for (const auto& [c, m] : terms) {
    if (m.zero || c == 0) continue;
    any = true;
    max_re = std::max(max_re, m.log.real());
  }
  if (!any) return 0.0;  // every monomial vanishes identically
  Complex acc(0, 0);
  Real largest = 0;
  for (const auto& [c, m] : terms) {
    if (m.zero || c == 0) continue;
    const Complex scaled = static_cast<Real>(c) * m.sign * std::exp(m.log - Complex(max_re, 0));
    acc += scaled;
    largest = std::max(largest, std::abs(scaled));
  }
  return std::abs(acc) / std::max(largest, 1e-300);
}

}  // namespace

Real recursion_residual_g2(const PsiSequence& seq, int m, int n) {
  if (m < n || n < 0) throw error("recursion needs m >= n >= 0");
  if (m + 2 > seq.max_n) throw error("psi cache too short for the requested (m, n)");
  std::vector<std::pair<Real, LogMonomial>> terms;
  terms.emplace_back(1.0, monomial(seq, {2, 2, m, n, n + m, m - n}));
  // det expansion: rows {m-2,m-1,m}, {m-1,m,m+1}, {m,m+1,m+2} paired with
  // columns {n, n+1, n+2} / {n-1, n, n+1} / {n-2, n-1, n}
  const int A[3][3] = {{m - 2, m - 1, m}, {m - 1, m, m + 1}, {m, m + 1, m + 2}};
  const int B[3][3] = {{n, n + 1, n + 2}, {n - 1, n, n + 1}, {n - 2, n - 1, n}};
  const int perm[6][4] = {{0, 1, 2, +1}, {1, 2, 0, +1}, {2, 0, 1, +1},
                          {0, 2, 1, -1}, {1, 0, 2, -1}, {2, 1, 0, -1}};
  for (const auto& p : perm) {
    const Real sgn = static_cast<Real>(p[3]);
    terms.emplace_back(-sgn, monomial(seq, {A[0][p[0]], B[0][p[0]], A[1][p[1]], B[1][p[1]],
                                            A[2][p[2]], B[2][p[2]]}));
  }
  return log_space_residual(terms);
}

Real elliptic_recursion_residual(const PsiSequence& seq, int m, int n) {
  std::vector<std::pair<Real, LogMonomial>> terms;
  terms.emplace_back(1.0, monomial(seq, {n + m, m - n}));
  terms.emplace_back(-1.0, monomial(seq, {m - 1, n, m + 1, n}));
  terms.emplace_back(1.0, monomial(seq, {m, n + 1, m, n - 1}));
  return log_space_residual(terms);
}

Real phi_residual(const PsiSequence& seq, int m, int n) {
  return elliptic_recursion_residual(seq, m, n);
}

QLimit q_limit_from_jet(const WpJet& wm, Complex x) {
  QLimit q;
  q.q = x * x - wm.wp(0, 1) - x * wm.wp(1, 1);
  for (int i = 0; i < 2; ++i) {
    q.qi[static_cast<std::size_t>(i)] = -(wm.wp(0, 1, i) + x * wm.wp(1, 1, i));
  }
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j)
      q.qij[static_cast<std::size_t>(i + j)] = -(wm.wp(0, 1, i, j) + x * wm.wp(1, 1, i, j));
  return q;
}

QLimit q_limits(const SigmaContext& ctx, const CurvePoint& p, int m) {
  if (m < 2) throw degenerate_point_error("q limit needs m >= 2 so that mu is off the divisor");
  const Vec u = embed(ctx.curve, ctx.pd, p);
  const WpJet wm = wp_jet(ctx, static_cast<Real>(m) * u);
  return q_limit_from_jet(wm, p.x);
}

namespace {
Complex xi3_closed_from_qlimit(const QLimit& q, Complex x) {
  return 2.0 * q.q * q.q * q.q + q.qij[1] * q.q - q.qi[0] * q.qi[1] +
         x * (q.qij[2] * q.q - q.qi[1] * q.qi[1]);
}
Complex xi3_closed_printed(const QLimit& q, Complex x) {
  // q(2 q^2 - q12 - x q22) - q2 (q1 + x q2)
  return q.q * (2.0 * q.q * q.q - q.qij[1] - x * q.qij[2]) - q.qi[1] * (q.qi[0] + x * q.qi[1]);
}
}  // namespace

XiBundle xi_bundle(const SigmaContext& ctx, const CurvePoint& p, int m, int n) {
  if (!(m > n && n >= 2)) throw error("xi bundle needs m > n >= 2");
  PsiSequence seq = psi_sequence_g2(ctx, p, m + n + 2);
  auto ps = [&](int k) { return seq.value(k); };
  const Complex x = p.x;
  const Complex y = p.y;

  XiBundle xb;
  xb.xi0 = ps(2) * ps(2) * ps(m - n) * ps(m + n) / (ps(m) * ps(m) * ps(n) * ps(n));
  xb.xi1_m = ps(m - 2) * ps(m + 2) / (ps(m) * ps(m));
  xb.xi1_n = ps(n - 2) * ps(n + 2) / (ps(n) * ps(n));
  const Complex xi3m =
      (ps(m - 1) * ps(m - 1) * ps(m + 2) + ps(m + 1) * ps(m + 1) * ps(m - 2)) /
      (ps(m) * ps(m) * ps(m));
  const Complex xi3n =
      (ps(n - 1) * ps(n - 1) * ps(n + 2) + ps(n + 1) * ps(n + 1) * ps(n - 2)) /
      (ps(n) * ps(n) * ps(n));
  xb.xi3_m_def = xi3m;
  xb.xi3_n_def = xi3n;
  xb.q_m = ps(m - 1) * ps(m + 1) / (ps(m) * ps(m));
  xb.q_n = ps(n - 1) * ps(n + 1) / (ps(n) * ps(n));
  xb.xi2 = xb.q_m * xi3n - xb.q_n * xi3m;

  const WpJet wm = wp_jet(ctx, static_cast<Real>(m) * seq.u);
  const WpJet wn = wp_jet(ctx, static_cast<Real>(n) * seq.u);
  const WpJet w2 = wp_jet(ctx, 2.0 * seq.u);
  xb.qlim_m = q_limit_from_jet(wm, x);
  xb.qlim_n = q_limit_from_jet(wn, x);
  xb.xi3_m_closed = xi3_closed_from_qlimit(xb.qlim_m, x);
  xb.xi3_n_closed = xi3_closed_from_qlimit(xb.qlim_n, x);
  xb.xi3_m_closed_printed = xi3_closed_printed(xb.qlim_m, x);

  const Complex y4 = 4.0 * y * y;
  const QJet qmn = q_jet(wm, wn);
  const QJet qm2 = q_jet(wm, w2);
  const QJet qn2 = q_jet(wn, w2);
  xb.xi0_closed = y4 * qmn.q;
  xb.xi1_m_closed = y4 * qm2.q;
  xb.xi1_n_closed = y4 * qn2.q;
  xb.xi2_closed = y4 * (qmn.q - qm2.q + qn2.q);

  // xi0(nu,mu) = -xi0(mu,nu); corrected assembly has "+ xi2"
  xb.assembly = -xb.xi0 + xb.xi1_m - xb.xi1_n + xb.xi2;
  xb.assembly_printed = -xb.xi0 + xb.xi1_m - xb.xi1_n - xb.xi2;
  return xb;
}

Xi3Pair xi3_jacobian(const SigmaContext& ctx, const Vec& u, int m) {
  PsiSequence seq = psi_sequence_g2_jacobian(ctx, u, m + 2);
  auto ps = [&](int k) { return seq.value(k); };
  Xi3Pair out;
  out.definition =
      (ps(m - 1) * ps(m - 1) * ps(m + 2) + ps(m + 1) * ps(m + 1) * ps(m - 2)) /
      (ps(m) * ps(m) * ps(m));

  const WpJet wu = wp_jet(ctx, u);
  const WpJet wm = wp_jet(ctx, static_cast<Real>(m) * u);
  const QJet q = q_jet(wm, wu);
  const Complex psi1_6 = std::exp(6.0 * (log_sigma(ctx, u) -
                                         (sigma_jet(ctx, u, 1).log_scale +
                                          std::log(sigma_jet(ctx, u, 1).s[2]))));
  const Complex Q = q.q;
  const Complex Q1 = q.qi[0], Q2 = q.qi[1];
  const Complex Q11 = q.qij[0], Q12 = q.qij[1], Q22 = q.qij[2];
  const Complex wp12u = wu.wp(0, 1), wp22u = wu.wp(1, 1);
  out.closed = psi1_6 * (2.0 * Q * Q * Q + Q11 * Q - Q1 * Q1 + wp22u * (Q12 * Q - Q1 * Q2) -
                         wp12u * (Q22 * Q - Q2 * Q2));
  out.closed_printed =
      psi1_6 * (Q * (2.0 * Q * Q + Q11 - wp22u * Q12 + wp12u * Q22) - Q1 * Q1 -
                wp22u * Q1 * Q2 + wp12u * Q2 * Q2);
  return out;
}

PainleveFit painleve_fit(const PsiSequence& seq, int n_first, int n_last) {
  auto beta = [&](int n) -> Complex {
    return seq.value(n + 1) * seq.value(n - 1) / (seq.value(n) * seq.value(n));
  };
  // two consecutive relations form a linear system for (z, a)
  const Complex b1 = beta(n_first), b2 = beta(n_first + 1);
  Eigen::Matrix2cd A;
  A << 1.0 / b1, 1.0 / (b1 * b1), 1.0 / b2, 1.0 / (b2 * b2);
  Eigen::Vector2cd rhs;
  rhs << beta(n_first + 1) * beta(n_first - 1), beta(n_first + 2) * beta(n_first);
  const Complex det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
  Real scale = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) scale = std::max(scale, std::abs(A(i, j)));
  if (std::abs(det) <= 1e-10 * scale * scale) {
    throw singular_fit_error("dP-I fit system is singular");
  }
  const Eigen::Vector2cd za = A.partialPivLu().solve(rhs);
  PainleveFit fit;
  fit.z = za(0);
  fit.a = za(1);
  for (int n = n_first; n <= n_last; ++n) {
    const Complex lhs = beta(n + 1) * beta(n - 1);
    const Complex rhsv = fit.z / beta(n) + fit.a / (beta(n) * beta(n));
    fit.residuals[n] = std::abs(lhs - rhsv) / std::max(1.0, std::abs(lhs));
  }
  return fit;
}

}  // namespace kleinian
