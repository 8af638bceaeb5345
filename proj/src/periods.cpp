#include "kleinian/periods.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "kleinian/polynomial.hpp"
#include "kleinian/quadrature.hpp"

namespace kleinian {

namespace {

// raw chain-loop period matrix: row k in [0, g) is oint_{gamma_j} du_{k+1},
// row g+k is oint_{gamma_j} dr_{k+1}; the loop integral equals twice the
// segment integral
Mat chain_matrix(const Curve& curve, const HomologyBasis& basis) {
  const int g = curve.genus;
  Mat M(2 * g, 2 * g);
  std::vector<int> powers(static_cast<std::size_t>(2 * g));
  for (int p = 0; p < 2 * g; ++p) powers[static_cast<std::size_t>(p)] = p;
  for (int j = 0; j < 2 * g; ++j) {
    const auto& seg = basis.segments[static_cast<std::size_t>(j)];
    const auto raw = segment_integrals_branch_endpoints(curve, seg.a, seg.b, seg.y_mid, powers);
    for (int k = 0; k < g; ++k) M(k, j) = 2.0 * raw[static_cast<std::size_t>(k)];
    for (int k = 1; k <= g; ++k) {
      const Vec num = differential_numerator(curve, {DifferentialKind::Family::second, k});
      Complex acc(0, 0);
      for (int p = 0; p < 2 * g; ++p) acc += num(p) * raw[static_cast<std::size_t>(p)];
      M(g + k - 1, j) = 2.0 * acc;
    }
  }
  return M;
}

// Intersection numbers of the chain loops from the Riemann bilinear
// identities. With U_i a local antiderivative of du_i at infinity, the dr
// basis is dual (Res U_i dr_j = delta_ij), giving
//   P_du S^{-1} P_dr^T = -2 pi i I,   P_du S^{-1} P_du^T = 0,
//   P_dr S^{-1} P_dr^T = 0,
// an exactly determined linear system for the antisymmetric S^{-1}.
IntMat intersection_from_periods(const Mat& M, int g) {
  const int n = 2 * g;
  std::vector<std::pair<int, int>> pairs;
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) pairs.emplace_back(j, k);
  const int np = static_cast<int>(pairs.size());

  std::vector<Vec> rows;
  std::vector<Complex> rhs;
  auto add_eq = [&](const Eigen::RowVectorXcd& vi, const Eigen::RowVectorXcd& vl, Complex r) {
    Vec row(np);
    for (int idx = 0; idx < np; ++idx) {
      const auto [j, k] = pairs[static_cast<std::size_t>(idx)];
      row(idx) = vi(j) * vl(k) - vi(k) * vl(j);
    }
    rows.push_back(row);
    rhs.push_back(r);
  };
  for (int i = 0; i < g; ++i)
    for (int l = 0; l < g; ++l)
      add_eq(M.row(i), M.row(g + l), (i == l) ? Complex(0, -2.0 * kPi) : Complex(0, 0));
  for (int i = 0; i < g; ++i)
    for (int l = i + 1; l < g; ++l) {
      add_eq(M.row(i), M.row(l), Complex(0, 0));
      add_eq(M.row(g + i), M.row(g + l), Complex(0, 0));
    }

  const int ne = static_cast<int>(rows.size());
  RealMat A(2 * ne, np);
  RealVec b(2 * ne);
  for (int e = 0; e < ne; ++e) {
    for (int c = 0; c < np; ++c) {
      A(2 * e, c) = rows[static_cast<std::size_t>(e)](c).real();
      A(2 * e + 1, c) = rows[static_cast<std::size_t>(e)](c).imag();
    }
    b(2 * e) = rhs[static_cast<std::size_t>(e)].real();
    b(2 * e + 1) = rhs[static_cast<std::size_t>(e)].imag();
  }
  RealVec sol = A.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);

  RealMat Sinv = RealMat::Zero(n, n);
  for (int idx = 0; idx < np; ++idx) {
    const auto [j, k] = pairs[static_cast<std::size_t>(idx)];
    Sinv(j, k) = sol(idx);
    Sinv(k, j) = -sol(idx);
  }
  const RealMat S = Sinv.inverse();
  IntMat Si(n, n);
  Real err = 0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      Si(j, k) = static_cast<int>(std::lround(S(j, k)));
      err = std::max(err, std::abs(S(j, k) - Si(j, k)));
    }
  }
  if (err > 1e-6) throw ill_conditioned_error("intersection matrix is not integral");
  if ((Si + Si.transpose()).cwiseAbs().maxCoeff() != 0) {
    throw ill_conditioned_error("intersection matrix is not antisymmetric");
  }
  return Si;
}

struct ChainPeriods {
  HomologyBasis basis;
  Mat M;  // over the canonical basis columns (alpha..., beta...)
};

ChainPeriods chain_periods(const Curve& curve, const BranchData& branch) {
  const int g = curve.genus;
  HomologyBasis basis = build_homology_chain(curve, branch);
  const Mat M_chain = chain_matrix(curve, basis);
  basis.chain_intersection = intersection_from_periods(M_chain, g);
  const IntMat T = symplectic_reduce(basis.chain_intersection);
  basis.alpha_combo = T.topRows(g);
  basis.beta_combo = T.bottomRows(g);
  IntMat J0 = IntMat::Zero(2 * g, 2 * g);
  for (int i = 0; i < g; ++i) {
    J0(i, g + i) = 1;
    J0(g + i, i) = -1;
  }
  basis.basis_intersection = J0;
  Mat Tc = T.cast<Real>().cast<Complex>().transpose();
  return ChainPeriods{std::move(basis), M_chain * Tc};
}

}  // namespace

HomologyBasis build_homology(const Curve& curve, const BranchData& branch) {
  return chain_periods(curve, branch).basis;
}

HomologyBasis build_homology(const Curve& curve) {
  return build_homology(curve, branch_points(curve));
}

Complex integrate_differential(const Curve& curve, const DifferentialKind& kind,
                               const HomologyBasis& basis, const Cycle& cycle) {
  const int g = curve.genus;
  const Vec num = differential_numerator(curve, kind);
  std::vector<int> powers(static_cast<std::size_t>(2 * g));
  for (int p = 0; p < 2 * g; ++p) powers[static_cast<std::size_t>(p)] = p;
  Complex total(0, 0);
  for (int j = 0; j < 2 * g; ++j) {
    const int c = cycle.chain_coefficients(j);
    if (c == 0) continue;
    const auto& seg = basis.segments[static_cast<std::size_t>(j)];
    const auto raw = segment_integrals_branch_endpoints(curve, seg.a, seg.b, seg.y_mid, powers);
    Complex acc(0, 0);
    for (int p = 0; p < 2 * g; ++p) acc += num(p) * raw[static_cast<std::size_t>(p)];
    total += static_cast<Real>(c) * 2.0 * acc;
  }
  return total;
}

Complex integrate_over_loop(const Curve& curve, const DifferentialKind& kind,
                            const std::vector<Complex>& loop, Complex y_start) {
  const Vec num = differential_numerator(curve, kind);
  Complex total(0, 0);
  Complex y = y_start;
  for (std::size_t leg = 0; leg + 1 < loop.size(); ++leg) {
    const Complex a = loop[leg];
    const Complex b = loop[leg + 1];
    const Complex y_leg_start = y;
    auto integrand = [&](const std::vector<Real>& ts) {
      std::vector<std::vector<Complex>> out(ts.size());
      Complex yy = y_leg_start;
      Complex prev = a;
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const Complex x = a + (b - a) * ts[i];
        yy = continue_y_segment(curve, prev, x, yy);
        prev = x;
        out[i] = {horner(num, x) / (2.0 * yy) * (b - a)};
      }
      return out;
    };
    const auto val = integrate_gl_adaptive(integrand, 1);
    total += val[0];
    y = continue_y_segment(curve, a, b, y);
  }
  return total;
}

PeriodData compute_periods(const Curve& curve) {
  const int g = curve.genus;
  auto cp = chain_periods(curve, branch_points(curve));
  const Mat& W = cp.M;
  PeriodData pd;
  pd.genus = g;
  pd.omega1 = W.block(0, 0, g, g) / 2.0;
  pd.omega2 = W.block(0, g, g, g) / 2.0;
  pd.eta1 = W.block(g, 0, g, g) / 2.0;
  pd.eta2 = W.block(g, g, g, g) / 2.0;

  Eigen::JacobiSVD<Mat> svd(pd.omega1);
  const Real cond = svd.singularValues()(0) / svd.singularValues()(g - 1);
  if (!(cond < tol::cond_omega)) throw ill_conditioned_error("cond(omega') exceeds 1e8");

  pd.tau = pd.omega1.partialPivLu().solve(pd.omega2);
  pd.homology = std::move(cp.basis);

  // canonical orientation puts Im tau in the positive cone; a failure here
  // means the intersection solve produced the wrong overall sign
  Eigen::SelfAdjointEigenSolver<RealMat> es(0.5 * (pd.tau.imag() + pd.tau.imag().transpose()));
  if (es.eigenvalues().minCoeff() <= tol::im_tau_eig) {
    throw ill_conditioned_error("Im tau is not positive definite");
  }
  return pd;
}

std::vector<ResidualReport> check_period_sanity(const PeriodData& pd) {
  const int g = pd.genus;
  std::vector<ResidualReport> out;
  const Real tau_asym = (pd.tau - pd.tau.transpose()).cwiseAbs().maxCoeff();
  out.push_back(make_gating("periods", "tau-symmetry", "2-6", "", tau_asym, tol::tau_symmetry));

  Eigen::SelfAdjointEigenSolver<RealMat> es(0.5 * (pd.tau.imag() + pd.tau.imag().transpose()));
  const Real min_eig = es.eigenvalues().minCoeff();
  // report as residual: max(0, threshold - eig); passes iff eig > 1e-6
  const Real im_resid = std::max(0.0, tol::im_tau_eig - min_eig);
  out.push_back(make_gating("periods", "im-tau-positive", "2-6", "", im_resid, 0.0));

  const Mat lhs = pd.eta1.transpose() * pd.omega2 - pd.omega1.transpose() * pd.eta2;
  const Mat target = Complex(0, -kPi / 2.0) * Mat::Identity(g, g);
  const Real legendre = (lhs - target).cwiseAbs().maxCoeff() / (kPi / 2.0);
  out.push_back(make_gating("periods", "legendre", "2-5/2-9", "", legendre, tol::legendre));
  return out;
}

namespace {
nlohmann::ordered_json mat_to_json(const Mat& m) {
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Mat mat_from_json(const nlohmann::json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = Complex(j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][0].get<Real>(),
                        j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)][1].get<Real>());
  return m;
}
}  // namespace

std::string period_data_to_json(const PeriodData& pd) {
  nlohmann::ordered_json j;
  j["genus"] = pd.genus;
  j["omega1"] = mat_to_json(pd.omega1);
  j["omega2"] = mat_to_json(pd.omega2);
  j["eta1"] = mat_to_json(pd.eta1);
  j["eta2"] = mat_to_json(pd.eta2);
  j["tau"] = mat_to_json(pd.tau);
  j["gamma_sq"] = {pd.gamma_sq.real(), pd.gamma_sq.imag()};
  return j.dump(2);
}

PeriodData period_data_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("period JSON parse: ") + e.what());
  }
  PeriodData pd;
  pd.genus = j.at("genus").get<int>();
  pd.omega1 = mat_from_json(j.at("omega1"));
  pd.omega2 = mat_from_json(j.at("omega2"));
  pd.eta1 = mat_from_json(j.at("eta1"));
  pd.eta2 = mat_from_json(j.at("eta2"));
  pd.tau = mat_from_json(j.at("tau"));
  pd.gamma_sq = Complex(j.at("gamma_sq")[0].get<Real>(), j.at("gamma_sq")[1].get<Real>());
  return pd;
}

}  // namespace kleinian
