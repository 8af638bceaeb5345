#include "kleinian/homology.hpp"

#include <algorithm>
#include <cmath>

#include "kleinian/paths.hpp"

namespace kleinian {

Vec differential_numerator(const Curve& curve, const DifferentialKind& kind) {
  const int g = curve.genus;
  const int deg = 2 * g + 1;
  Vec num = Vec::Zero(2 * g);
  if (kind.family == DifferentialKind::Family::first) {
    num(kind.index - 1) = Complex(1, 0);
  } else {
    const int j = kind.index;
    for (int k = j; k <= 2 * g + 1 - j; ++k) {
      if (k + 1 + j > deg) continue;
      num(k) = static_cast<Real>(k + 1 - j) * curve.lambdas(k + 1 + j);
    }
  }
  return num;
}

IntMat symplectic_reduce(const IntMat& S) {
  const int n = static_cast<int>(S.rows());
  const int g = n / 2;
  auto ip = [&](const IntVec& u, const IntVec& v) -> int { return (u.transpose() * S * v)(0, 0); };

  std::vector<IntVec> remaining;
  for (int i = 0; i < n; ++i) {
    IntVec e = IntVec::Zero(n);
    e(i) = 1;
    remaining.push_back(e);
  }
  std::vector<IntVec> alphas, betas;
  for (int pair = 0; pair < g; ++pair) {
    int ia = -1, ib = -1;
    for (std::size_t a = 0; a < remaining.size() && ia < 0; ++a) {
      for (std::size_t b = 0; b < remaining.size(); ++b) {
        if (a == b) continue;
        if (std::abs(ip(remaining[a], remaining[b])) == 1) {
          ia = static_cast<int>(a);
          ib = static_cast<int>(b);
          break;
        }
      }
    }
    if (ia < 0) throw error("intersection matrix lacks a unimodular pairing");
    IntVec ea = remaining[static_cast<std::size_t>(ia)];
    IntVec eb = remaining[static_cast<std::size_t>(ib)];
    if (ip(ea, eb) == -1) eb = -eb;
    std::vector<IntVec> rest;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      if (static_cast<int>(k) == ia || static_cast<int>(k) == ib) continue;
      const IntVec& r = remaining[k];
      rest.push_back(r - ip(r, eb) * ea + ip(r, ea) * eb);
    }
    alphas.push_back(ea);
    betas.push_back(eb);
    remaining = std::move(rest);
  }
  IntMat T(n, n);
  for (int i = 0; i < g; ++i) T.row(i) = alphas[static_cast<std::size_t>(i)].transpose();
  for (int i = 0; i < g; ++i) T.row(g + i) = betas[static_cast<std::size_t>(i)].transpose();

  IntMat J0 = IntMat::Zero(n, n);
  for (int i = 0; i < g; ++i) {
    J0(i, g + i) = 1;
    J0(g + i, i) = -1;
  }
  if ((T * S * T.transpose() - J0).cwiseAbs().maxCoeff() != 0) {
    throw error("symplectic reduction failed");
  }
  return T;
}

namespace {

Real min_gap(const Vec& roots) {
  Real m = 1e300;
  for (Eigen::Index i = 0; i < roots.size(); ++i)
    for (Eigen::Index j = i + 1; j < roots.size(); ++j)
      m = std::min(m, std::abs(roots(i) - roots(j)));
  return m;
}

// chain order: the roots in the order segment endpoints are visited
std::vector<int> default_order(int deg) {
  std::vector<int> order(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) order[static_cast<std::size_t>(i)] = i;
  return order;
}

// greedy nearest-neighbour pairing for the retry path
std::vector<int> nearest_neighbour_order(const Vec& roots) {
  const int deg = static_cast<int>(roots.size());
  std::vector<bool> used(static_cast<std::size_t>(deg), false);
  std::vector<int> order;
  const int n_pairs = (deg - 1) / 2;
  for (int p = 0; p < n_pairs; ++p) {
    int bi = -1, bj = -1;
    Real best = 1e300;
    for (int i = 0; i < deg; ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < deg; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const Real d = std::abs(roots(i) - roots(j));
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used[static_cast<std::size_t>(bi)] = used[static_cast<std::size_t>(bj)] = true;
    order.push_back(bi);
    order.push_back(bj);
  }
  for (int i = 0; i < deg; ++i) {
    if (!used[static_cast<std::size_t>(i)]) order.push_back(i);
  }
  return order;
}

bool cuts_cross(const Vec& roots, const std::vector<int>& order, int genus) {
  if (genus < 2) return false;
  // finite cuts are the (2i, 2i+1) chain segments
  for (int i = 0; i < genus; ++i) {
    for (int j = i + 1; j < genus; ++j) {
      if (segments_cross(roots(order[static_cast<std::size_t>(2 * i)]),
                         roots(order[static_cast<std::size_t>(2 * i + 1)]),
                         roots(order[static_cast<std::size_t>(2 * j)]),
                         roots(order[static_cast<std::size_t>(2 * j + 1)]))) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace

// segment layout and chain-coherent sheet seeds; the intersection data is
// attached by compute_periods
HomologyBasis build_homology_chain(const Curve& curve, const BranchData& branch) {
  const int deg = curve.degree();
  const Vec& roots = branch.points;

  std::vector<int> order = default_order(deg);
  if (cuts_cross(roots, order, curve.genus)) {
    order = nearest_neighbour_order(roots);
    if (cuts_cross(roots, order, curve.genus)) {
      throw cut_crossing_error("cut layout remains crossing after re-pairing");
    }
  }

  HomologyBasis basis;
  basis.branch = branch;
  basis.branch.pairing.clear();
  for (int i = 0; i < curve.genus; ++i) {
    basis.branch.pairing.push_back({order[static_cast<std::size_t>(2 * i)],
                                    order[static_cast<std::size_t>(2 * i + 1)]});
  }
  basis.branch.pairing.push_back({order[static_cast<std::size_t>(deg - 1)], -1});

  // anchor far below the root cluster; overall anchor branch cancels from
  // every derived quantity
  Complex centroid(0, 0);
  for (Eigen::Index i = 0; i < roots.size(); ++i) centroid += roots(i);
  centroid /= static_cast<Real>(roots.size());
  Real spread = 0;
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    spread = std::max(spread, std::abs(roots(i) - centroid));
  }
  const Complex anchor = centroid - Complex(0, 2.0 * (1.0 + 2.0 * spread));
  Complex y = std::sqrt(eval_f(curve, anchor));
  const Real margin = 0.25 * min_gap(roots);

  Complex cursor = anchor;
  for (int j = 0; j + 1 < deg; ++j) {
    const Complex a = roots(order[static_cast<std::size_t>(j)]);
    const Complex b = roots(order[static_cast<std::size_t>(j + 1)]);
    const Complex mid = (a + b) * 0.5;
    const auto hop = route_polyline(cursor, mid, roots, margin);
    y = continue_y(curve, hop, y);
    cursor = mid;
    basis.segments.push_back(ChainSegment{a, b, y});
  }
  return basis;
}

}  // namespace kleinian
