#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kleinian/types.hpp"

namespace kleinian {

// y^2 = f(x) = lambda_0 + lambda_1 x + ... + x^{2g+1}, monic odd-degree model
struct Curve {
  int genus = 2;
  Vec lambdas;  // size 2g+2, lambdas(2g+1) == 1 exactly

  int degree() const { return 2 * genus + 1; }
};

// construction validates monicity and simple roots
Curve make_curve(int genus, const Vec& lambdas);

struct CurvePoint {
  enum class Kind { affine, infinity };
  Kind kind = Kind::infinity;
  Complex x{};
  Complex y{};

  static CurvePoint at_infinity() { return CurvePoint{}; }
  static CurvePoint affine(Complex x, Complex y) { return CurvePoint{Kind::affine, x, y}; }
  bool is_infinity() const { return kind == Kind::infinity; }
};

// finite branch points plus the cut pairing (last pair reaches infinity)
struct BranchData {
  Vec points;                                // 2g+1 roots of f, sorted by (Re, Im)
  std::vector<std::array<int, 2>> pairing;   // g+1 pairs; second index -1 means infinity
};

Complex eval_f(const Curve& curve, Complex x);
Complex eval_fprime(const Curve& curve, Complex x);

// affine on-curve check relative to 1 + |f(x)|
bool on_curve(const Curve& curve, const CurvePoint& p, Real tolerance = tol::on_curve);

// point with y = principal sqrt of f(x)
CurvePoint lift_point(const Curve& curve, Complex x);

BranchData branch_points(const Curve& curve);

// Track the y-sheet along a sampled x-path, refining steps until the sheet
// choice is unambiguous (|delta y| / |y| < 0.5 per accepted step). Throws
// sheet_ambiguity_error if both square roots are equidistant within 1e-10
// relative at some step.
Complex continue_y(const Curve& curve, std::span<const Complex> path, Complex y_start);

// same, refining a single straight segment
Complex continue_y_segment(const Curve& curve, Complex from, Complex to, Complex y_start);

// deterministic nonsingular curve from a seed; roots have pairwise separation
// >= 0.5 and magnitude <= 3
Curve random_curve(std::uint64_t seed, int genus);

std::string curve_to_json(const Curve& curve);
Curve curve_from_json(const std::string& text);

}  // namespace kleinian
