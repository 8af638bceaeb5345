#include "kleinian/curve.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "kleinian/polynomial.hpp"
#include "kleinian/rng.hpp"

namespace kleinian {

namespace {

Real coefficient_scale(const Vec& lambdas) {
  Real s = 0;
  for (Eigen::Index k = 0; k < lambdas.size(); ++k) s = std::max(s, std::abs(lambdas(k)));
  return std::max(s, 1.0);
}

Vec sorted_lex(Vec v) {
  std::vector<Complex> tmp(v.data(), v.data() + v.size());
  std::sort(tmp.begin(), tmp.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = tmp[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

Complex eval_f(const Curve& curve, Complex x) { return horner(curve.lambdas, x); }

Complex eval_fprime(const Curve& curve, Complex x) { return horner_derivative(curve.lambdas, x); }

bool on_curve(const Curve& curve, const CurvePoint& p, Real tolerance) {
  if (p.is_infinity()) return true;
  const Complex fx = eval_f(curve, p.x);
  return std::abs(p.y * p.y - fx) <= tolerance * (1.0 + std::abs(fx));
}

CurvePoint lift_point(const Curve& curve, Complex x) {
  return CurvePoint::affine(x, std::sqrt(eval_f(curve, x)));
}

BranchData branch_points(const Curve& curve) {
  const int deg = curve.degree();
  // companion matrix of the monic polynomial
  Mat companion = Mat::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = Complex(1, 0);
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -curve.lambdas(i);
  Eigen::ComplexEigenSolver<Mat> solver(companion, /*computeEigenvectors=*/false);
  Vec roots = solver.eigenvalues();

  const Real scale = coefficient_scale(curve.lambdas);
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    Complex e = roots(i);
    for (int it = 0; it < 60; ++it) {
      const Complex fe = eval_f(curve, e);
      const Complex fpe = eval_fprime(curve, e);
      if (std::abs(fpe) == 0.0) break;
      const Complex step = fe / fpe;
      e -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(e))) break;
    }
    if (std::abs(eval_f(curve, e)) > tol::root * scale * 10) {
      // Newton failed to polish below target; with simple roots this only
      // happens for near-degenerate configurations.
      throw degenerate_curve_error("branch point polish failed");
    }
    roots(i) = e;
  }
  roots = sorted_lex(roots);
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    for (Eigen::Index j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots(i) - roots(j)) < tol::root_separation) {
        throw degenerate_curve_error("branch points closer than 1e-8");
      }
    }
  }

  BranchData out;
  out.points = roots;
  for (int i = 0; i < curve.genus; ++i) out.pairing.push_back({2 * i, 2 * i + 1});
  out.pairing.push_back({deg - 1, -1});
  return out;
}

Curve make_curve(int genus, const Vec& lambdas) {
  if (genus != 1 && genus != 2) throw error("genus must be 1 or 2");
  if (lambdas.size() != 2 * genus + 2) throw error("lambda vector has wrong length");
  if (lambdas(2 * genus + 1) != Complex(1, 0)) {
    throw error("model must be monic: lambda_{2g+1} == 1 exactly");
  }
  Curve c{genus, lambdas};
  branch_points(c);  // validates simple roots
  return c;
}

namespace {

Complex step_y(const Curve& curve, Complex x, Complex y_prev) {
  const Complex w = std::sqrt(eval_f(curve, x));
  const Real dp = std::abs(w - y_prev);
  const Real dm = std::abs(-w - y_prev);
  if (std::abs(dp - dm) <= 1e-10 * std::max(dp, dm) && std::abs(w) > 0) {
    throw sheet_ambiguity_error("square roots equidistant while tracking y");
  }
  return dp <= dm ? w : -w;
}

}  // namespace

Complex continue_y_segment(const Curve& curve, Complex from, Complex to, Complex y_start) {
  // adaptive marching; accepted steps keep |delta y| / |y| < 0.1
  Real t = 0.0;
  Real h = 1.0;
  Complex y = y_start;
  int guard = 0;
  while (t < 1.0) {
    if (++guard > 2000000) throw no_convergence_error("y tracking stalled");
    h = std::min(h, 1.0 - t);
    const Complex xb = from + (to - from) * (t + h);
    const Complex w = std::sqrt(eval_f(curve, xb));
    const Real dp = std::abs(w - y);
    const Real dm = std::abs(-w - y);
    const Real closer = std::min(dp, dm);
    const bool ambiguous = std::abs(dp - dm) <= 0.3 * std::max(dp, dm);
    if (h > 1e-12 && (closer > 0.1 * std::abs(y) || ambiguous) && std::abs(y) > 0) {
      h *= 0.5;
      continue;
    }
    y = step_y(curve, xb, y);
    t += h;
    h *= 2.0;
  }
  return y;
}

Complex continue_y(const Curve& curve, std::span<const Complex> path, Complex y_start) {
  if (path.empty()) return y_start;
  Complex y = y_start;
  for (std::size_t i = 1; i < path.size(); ++i) {
    y = continue_y_segment(curve, path[i - 1], path[i], y);
  }
  return y;
}

Curve random_curve(std::uint64_t seed, int genus) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 0x1234567ULL + static_cast<std::uint64_t>(genus));
  const int deg = 2 * genus + 1;
  Vec roots(deg);
  int placed = 0;
  int guard = 0;
  while (placed < deg) {
    if (++guard > 100000) throw error("random_curve sampling stalled");
    const Complex cand = rng.uniform_box(2.4, 1.3);
    if (std::abs(cand) > 3.0) continue;
    bool ok = true;
    for (int i = 0; i < placed; ++i) {
      if (std::abs(cand - roots(i)) < 0.5) { ok = false; break; }
    }
    if (!ok) continue;
    roots(placed++) = cand;
  }
  Vec lambdas = poly_from_roots(roots);
  lambdas(deg) = Complex(1, 0);
  return make_curve(genus, lambdas);
}

std::string curve_to_json(const Curve& curve) {
  nlohmann::ordered_json j;
  j["genus"] = curve.genus;
  auto arr = nlohmann::ordered_json::array();
  for (Eigen::Index k = 0; k < curve.lambdas.size(); ++k) {
    arr.push_back({curve.lambdas(k).real(), curve.lambdas(k).imag()});
  }
  j["lambdas"] = arr;
  return j.dump(2);
}

Curve curve_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("curve JSON parse: ") + e.what());
  }
  if (!j.contains("genus") || !j.contains("lambdas")) {
    throw config_error("curve JSON needs 'genus' and 'lambdas'");
  }
  const int genus = j["genus"].get<int>();
  const auto& arr = j["lambdas"];
  Vec lambdas(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t k = 0; k < arr.size(); ++k) {
    lambdas(static_cast<Eigen::Index>(k)) = Complex(arr[k][0].get<Real>(), arr[k][1].get<Real>());
  }
  return make_curve(genus, lambdas);
}

}  // namespace kleinian
