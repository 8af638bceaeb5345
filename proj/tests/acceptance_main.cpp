// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Runs the full verification harness once (plus a second run for the
// determinism criterion) and evaluates each criterion over the records.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "kleinian/psi.hpp"
#include "kleinian/report.hpp"
#include "kleinian/rng.hpp"
#include "kleinian/sigma.hpp"
#include "kleinian/suites.hpp"
#include "oracles.hpp"

using namespace kleinian;

namespace {

struct Criterion {
  std::string label;
  bool pass = true;
  Real worst = 0;
  int count = 0;

  void absorb(const ResidualReport& r) {
    ++count;
    if (r.tolerance > 0) worst = std::max(worst, r.residual / r.tolerance);
    if (r.verdict == ResidualReport::Verdict::fail) pass = false;
  }
};

bool match(const ResidualReport& r, const std::string& suite, const std::string& prefix) {
  return r.suite == suite && r.identity.rfind(prefix, 0) == 0;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();

  SuiteConfig cfg;  // defaults: seeds {1,2,3}, all suites, max_m 8, 3 points
  cfg.timings = false;

  std::vector<ResidualReport> reports;
  try {
    reports = run_suites(cfg);
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance: pipeline construction: %s\n", e.what());
    return 3;
  }
  const auto t1 = clock::now();
  const Real run_s = std::chrono::duration<Real>(t1 - t0).count();

  std::vector<std::pair<std::string, std::function<bool(const ResidualReport&)>>> groups = {
      {"criterion-01 period sanity (tau symmetric, Im tau > 0, Legendre) on 10 curves",
       [](const ResidualReport& r) {
         return r.suite == "periods" && r.verdict != ResidualReport::Verdict::diagnostic;
       }},
      {"criterion-02 lemniscatic cross-check tau = i against the AGM oracle",
       [](const ResidualReport& r) { return match(r, "elliptic", "lemniscatic"); }},
      {"criterion-03 Jacobi inversion wp22 = x1+x2, wp12 = -x1 x2 on 21 divisors",
       [](const ResidualReport& r) {
         return r.suite == "inversion" && r.verdict != ResidualReport::Verdict::diagnostic;
       }},
      {"criterion-04 addition formulas (2-17 at 1e-8, 2-19 at 1e-6) on fresh pairs",
       [](const ResidualReport& r) { return match(r, "kleinian", "addition-formula"); }},
      {"criterion-05 differential identities, corrected forms at 1e-6",
       [](const ResidualReport& r) {
         return r.suite == "kleinian" && r.identity.find("(corrected)") != std::string::npos;
       }},
      {"criterion-06 elliptic recursion 1-3 (all n < m <= 10) and 1-4/1-5 at 1e-9",
       [](const ResidualReport& r) {
         return r.suite == "elliptic" && (r.identity == "recursion" ||
                                          r.identity.rfind("addition-ratio", 0) == 0);
       }},
      {"criterion-07 determinant recursion 3-26 (all n <= m <= 8, 3x3) + gamma invariance",
       [](const ResidualReport& r) {
         return match(r, "recursion-g2", "determinant-recursion") ||
                match(r, "recursion-g2", "gamma-rescale-invariance");
       }},
      {"criterion-08 lemma chain: Xi3 two-route, xi assembly, psi2 = 2y, psi0 = psi1 = 0",
       [](const ResidualReport& r) {
         return (match(r, "recursion-g2", "xi") || match(r, "recursion-g2", "psi") ||
                 match(r, "recursion-g2", "q-ratio") || match(r, "recursion-g2", "wp-at-2u")) &&
                r.verdict != ResidualReport::Verdict::diagnostic;
       }},
      {"criterion-09 large-x2 limit probes (3-10/3-11/3-15/3-17): monotone, final < 1e-3",
       [](const ResidualReport& r) { return match(r, "recursion-g2", "limit-probe"); }},
      {"criterion-10 discrete Painleve I: fitted (z, a) residuals and cross-fit",
       [](const ResidualReport& r) { return r.suite == "painleve"; }},
  };

  bool all_ok = true;
  for (const auto& [label, pred] : groups) {
    Criterion c;
    c.label = label;
    for (const ResidualReport& r : reports) {
      if (pred(r)) c.absorb(r);
    }
    if (c.count == 0) c.pass = false;
    all_ok = all_ok && c.pass;
    std::printf("%s %s  [records=%d, worst residual/tolerance=%.2e]\n",
                c.pass ? "PASS" : "FAIL", c.label.c_str(), c.count, c.worst);
  }

  // criterion 11: analytic derivatives vs finite differences, and bit-for-bit
  // report determinism across two full runs
  {
    Criterion c;
    c.label = "criterion-11 oracle suite: derivative/fd records + report determinism";
    for (const ResidualReport& r : reports) {
      if (match(r, "theta", "derivative-vs-fd")) c.absorb(r);
    }
    bool fd_sigma_ok = true;
    {
      const SigmaContext ctx = build_sigma_context(random_curve(1, 2));
      const auto pts = probe_points(ctx.curve, 2, 77);
      const Vec u = embed(ctx.curve, ctx.pd, pts[0]) + embed(ctx.curve, ctx.pd, pts[1]);
      auto f = [&](const Vec& uu) { return sigma(ctx, uu); };
      for (const MultiIndex alpha : {MultiIndex{0}, MultiIndex{1}, MultiIndex{0, 1}}) {
        const Complex an = sigma_deriv(ctx, u, alpha);
        const Complex fd = oracles::fd_richardson(f, u, alpha, 1e-4, 1);
        if (std::abs(an - fd) > 1e-7 * (1.0 + std::abs(an))) fd_sigma_ok = false;
      }
      for (const MultiIndex alpha : {MultiIndex{0, 1, 1}, MultiIndex{1, 1, 1, 1}}) {
        const Complex an = sigma_deriv(ctx, u, alpha);
        const Complex fd = oracles::fd_richardson(f, u, alpha, 1.2e-2, 2);
        if (std::abs(an - fd) > 1e-5 * (1.0 + std::abs(an))) fd_sigma_ok = false;
      }
    }
    const auto second = run_suites(cfg);
    const bool deterministic = reports_to_json(second) == reports_to_json(reports);
    c.pass = c.pass && fd_sigma_ok && deterministic && c.count > 0;
    all_ok = all_ok && c.pass;
    std::printf("%s %s  [fd-theta records=%d, sigma-fd=%s, deterministic=%s]\n",
                c.pass ? "PASS" : "FAIL", c.label.c_str(), c.count, fd_sigma_ok ? "ok" : "BAD",
                deterministic ? "yes" : "NO");
  }

  // non-gating diagnostics echoed for the record
  int diag = 0;
  for (const ResidualReport& r : reports) {
    if (r.verdict == ResidualReport::Verdict::diagnostic) ++diag;
  }
  const auto t2 = clock::now();
  std::printf("INFO diagnostics recorded (non-gating, incl. as-tabulated variants): %d\n", diag);
  std::printf("INFO total runtime: %.1f s (harness %.1f s)\n",
              std::chrono::duration<Real>(t2 - t0).count(), run_s);
  std::printf("%s acceptance\n", all_ok ? "PASS" : "FAIL");
  return all_ok ? 0 : 1;
}
