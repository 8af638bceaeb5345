#include "kleinian/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace kleinian {

const std::pair<std::vector<Real>, std::vector<Real>>& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::pair<std::vector<Real>, std::vector<Real>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<Real> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  // Newton on P_n via the three-term recurrence, initial guesses from the
  // Chebyshev approximation of the roots
  for (int i = 0; i < n; ++i) {
    Real xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    Real p0 = 0, p1 = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const Real p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * xi * p1 - k * p2) / (k + 1.0);
      }
      // p0 = P_n(xi), derivative from P_{n-1}
      const Real dp = n * (xi * p0 - p1) / (xi * xi - 1.0);
      const Real step = p0 / dp;
      xi -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // recompute derivative at the converged node
    p0 = 1.0;
    p1 = 0.0;
    for (int k = 0; k < n; ++k) {
      const Real p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * xi * p1 - k * p2) / (k + 1.0);
    }
    const Real dp = n * (xi * p0 - p1) / (xi * xi - 1.0);
    x[static_cast<std::size_t>(i)] = xi;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  // ascending node order
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<Real> xs(x.size()), ws(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    xs[i] = x[idx[i]];
    ws[i] = w[idx[i]];
  }
  const auto [pos, inserted] = cache.emplace(n, std::make_pair(std::move(xs), std::move(ws)));
  (void)inserted;
  return pos->second;
}

std::vector<Complex> segment_integrals_branch_endpoints(const Curve& curve, Complex a, Complex b,
                                                        Complex y_mid,
                                                        const std::vector<int>& powers) {
  const Complex c = (a + b) * 0.5;
  const Complex r = (b - a) * 0.5;
  std::vector<Complex> prev;
  for (int n = 32; n <= (1 << 14); n *= 2) {
    std::vector<Complex> xs(static_cast<std::size_t>(n));
    std::vector<Real> phi(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      // ascending s order
      const Real s = -std::cos((2.0 * (k + 1) - 1.0) * kPi / (2.0 * n));
      xs[static_cast<std::size_t>(k)] = c + r * s;
      phi[static_cast<std::size_t>(k)] = std::sqrt(1.0 - s * s);
    }
    // fix W = y/phi by continuity from the midpoint sheet outward
    const int mid = n / 2;
    std::vector<Complex> w_nodes(static_cast<std::size_t>(n));
    Complex y_at = continue_y_segment(curve, c, xs[static_cast<std::size_t>(mid)], y_mid);
    w_nodes[static_cast<std::size_t>(mid)] = y_at / phi[static_cast<std::size_t>(mid)];
    for (int k = mid + 1; k < n; ++k) {
      y_at = continue_y_segment(curve, xs[static_cast<std::size_t>(k - 1)],
                                xs[static_cast<std::size_t>(k)], y_at);
      w_nodes[static_cast<std::size_t>(k)] = y_at / phi[static_cast<std::size_t>(k)];
    }
    y_at = w_nodes[static_cast<std::size_t>(mid)] * phi[static_cast<std::size_t>(mid)];
    for (int k = mid - 1; k >= 0; --k) {
      y_at = continue_y_segment(curve, xs[static_cast<std::size_t>(k + 1)],
                                xs[static_cast<std::size_t>(k)], y_at);
      w_nodes[static_cast<std::size_t>(k)] = y_at / phi[static_cast<std::size_t>(k)];
    }
    std::vector<Complex> vals(powers.size(), Complex(0, 0));
    for (int k = 0; k < n; ++k) {
      const Complex x = xs[static_cast<std::size_t>(k)];
      const Complex base = 1.0 / (2.0 * w_nodes[static_cast<std::size_t>(k)]);
      for (std::size_t pi = 0; pi < powers.size(); ++pi) {
        Complex xp(1, 0);
        for (int e = 0; e < powers[pi]; ++e) xp *= x;
        vals[pi] += xp * base;
      }
    }
    for (auto& v : vals) v *= r * (kPi / n);
    if (!prev.empty()) {
      Real worst = 0;
      for (std::size_t pi = 0; pi < vals.size(); ++pi) {
        worst = std::max(worst, std::abs(vals[pi] - prev[pi]) / (1.0 + std::abs(vals[pi])));
      }
      if (worst <= tol::quadrature) return vals;
      if (n == (1 << 14) && worst > tol::quadrature_fail) {
        throw no_convergence_error("segment quadrature did not converge");
      }
    }
    prev = std::move(vals);
  }
  return prev;
}

std::vector<Complex> integrate_gl_adaptive(const BatchIntegrand& f, int n_components,
                                           int n_start) {
  std::vector<Complex> prev;
  for (int n = n_start; n <= (1 << 14); n *= 2) {
    const auto& [xs, ws] = gauss_legendre(n);
    std::vector<Real> ts(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) ts[static_cast<std::size_t>(k)] = 0.5 * (xs[static_cast<std::size_t>(k)] + 1.0);
    const auto fvs = f(ts);
    std::vector<Complex> vals(static_cast<std::size_t>(n_components), Complex(0, 0));
    for (int k = 0; k < n; ++k) {
      for (int c = 0; c < n_components; ++c) {
        vals[static_cast<std::size_t>(c)] +=
            ws[static_cast<std::size_t>(k)] * 0.5 * fvs[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)];
      }
    }
    if (!prev.empty()) {
      Real worst = 0;
      for (std::size_t c = 0; c < vals.size(); ++c) {
        worst = std::max(worst, std::abs(vals[c] - prev[c]) / (1.0 + std::abs(vals[c])));
      }
      if (worst <= tol::quadrature) return vals;
      if (n == (1 << 14) && worst > tol::quadrature_fail) {
        throw no_convergence_error("path quadrature did not converge");
      }
    }
    prev = std::move(vals);
  }
  return prev;
}

}  // namespace kleinian
