#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kleinian/curve.hpp"
#include "kleinian/homology.hpp"
#include "kleinian/report.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

// Half-period matrices in the convention 2*omega' = oint_alpha du (stored
// matrices are half the raw cycle integrals), tau = omega'^{-1} omega''.
struct PeriodData {
  int genus = 2;
  Mat omega1, omega2;  // omega', omega''
  Mat eta1, eta2;      // eta', eta''
  Mat tau;
  Complex gamma_sq{1, 0};  // calibrated by the sigma layer
  std::optional<HomologyBasis> homology;
};

// oint over the cycle of the chosen differential (sum of doubled chain
// segment integrals weighted by the cycle's chain coefficients)
Complex integrate_differential(const Curve& curve, const DifferentialKind& kind,
                               const HomologyBasis& basis, const Cycle& cycle);

// loop integral over an explicit closed polyline (regular quadrature with
// sheet tracking); the loop must avoid branch points
Complex integrate_over_loop(const Curve& curve, const DifferentialKind& kind,
                            const std::vector<Complex>& loop, Complex y_start);

PeriodData compute_periods(const Curve& curve);

// tau symmetry, Im tau positive definite, generalized Legendre relation
// eta'^T omega'' - omega'^T eta'' = -(i pi / 2) I  (the sign follows from the
// positive orientation of dr; the "+" variant is emitted as a diagnostic)
std::vector<ResidualReport> check_period_sanity(const PeriodData& pd);

std::string period_data_to_json(const PeriodData& pd);
PeriodData period_data_from_json(const std::string& text);

}  // namespace kleinian
