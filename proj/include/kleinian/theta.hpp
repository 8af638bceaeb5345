#pragma once

#include <array>
#include <vector>

#include "kleinian/types.hpp"

namespace kleinian {

// half-integer characteristic [a; b], entries stored doubled
struct Characteristic {
  IntVec a2, b2;

  static Characteristic zero(int g) {
    Characteristic c;
    c.a2 = IntVec::Zero(g);
    c.b2 = IntVec::Zero(g);
    return c;
  }
  int genus() const { return static_cast<int>(a2.size()); }
  // 4 a^T b mod 2; 1 = odd
  int parity() const {
    long s = 0;
    for (Eigen::Index i = 0; i < a2.size(); ++i) s += static_cast<long>(a2(i)) * b2(i);
    return static_cast<int>(((s % 2) + 2) % 2);
  }
  Vec a() const { return a2.cast<Real>().cast<Complex>() / 2.0; }
  Vec b() const { return b2.cast<Real>().cast<Complex>() / 2.0; }
};

std::vector<Characteristic> odd_characteristics(int g);

struct ThetaConfig {
  Real eps = 1e-13;    // series tail target
  int radius_cap = 64; // max lattice radius
};

// theta[a;b](z; tau) = sum_n exp(2 pi i (1/2 (n+a)^T tau (n+a) + (n+a)^T (z+b)))
//
// Multi-indices are lists of z-component indices (0-based, repeats allowed),
// |alpha| <= 4; derivatives multiply each term by prod_k 2 pi i (n+a)_{alpha_k}.
using MultiIndex = std::vector<int>;

// flat layout of the 15 multi-indices up to order 4 for g <= 2:
// offset(order) + (number of indices equal to 1)
int multi_index_slot(const MultiIndex& sorted_alpha);
extern const std::array<MultiIndex, 15> kMultiIndexTable;

// all derivative sums up to `order` in a single lattice enumeration; slots for
// indices involving component 1 are left at zero when g == 1
std::array<Complex, 15> theta_derivative_sums(const Vec& z, const Mat& tau,
                                              const Characteristic& chi, int order,
                                              const ThetaConfig& cfg);

Complex theta(const Vec& z, const Mat& tau, const Characteristic& chi,
              const ThetaConfig& cfg = {});
Complex theta_deriv(const Vec& z, const Mat& tau, const Characteristic& chi,
                    const MultiIndex& alpha, const ThetaConfig& cfg = {});

// z = z_red + m + tau m' with Y^{-1} Im z_red in [-1/2, 1/2)^g and
// theta(z) = exp(log_prefactor) * theta(z_red)
struct ReducedArgument {
  Vec z_red;
  Complex log_prefactor;
  IntVec m, mp;
};
ReducedArgument reduce_argument(const Vec& z, const Mat& tau, const Characteristic& chi);

}  // namespace kleinian
