#pragma once

#include <map>
#include <vector>

#include "kleinian/abel.hpp"
#include "kleinian/sigma.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

// psi_n(u) = sigma(n u) / sigma_2(u)^{n^2} on the embedded genus-2 curve,
// psi_n(u) = sigma(n u) / sigma(u)^{n^2} in the elliptic case, and
// Phi_n(u) = sigma(n u) / sigma(u)^{n^2} on the genus-2 Jacobian.
//
// Values are cached as complex logarithms; indices 0 and 1 of the on-curve
// flavour are exact zeros. psi_{-n} = -psi_n.
struct PsiSequence {
  enum class Flavor { psi_on_curve, elliptic, phi_on_jacobian, psi_on_jacobian };
  Flavor flavor = Flavor::psi_on_curve;
  CurvePoint base;  // meaningful for psi_on_curve
  Vec u;
  int max_n = 0;
  std::vector<Complex> log_values;  // index n
  std::vector<bool> is_zero;

  Complex value(int n) const;
  Complex log_value(int n) const;  // n >= 0, non-zero entries only
  bool zero(int n) const { return is_zero[static_cast<std::size_t>(n < 0 ? -n : n)]; }
};

// on-curve sequence at u = iota(P); requires y != 0 and |sigma_2(u)| away
// from zero
PsiSequence psi_sequence_g2(const SigmaContext& ctx, const CurvePoint& p, int max_n);
// same denominators but at an arbitrary Jacobian point (the Psi lift)
PsiSequence psi_sequence_g2_jacobian(const SigmaContext& ctx, const Vec& u, int max_n);
// elliptic flavour (genus-1 context)
PsiSequence psi_sequence_elliptic(const SigmaContext& ctx, const Vec& u, int max_n);
// Kanayama flavour on the genus-2 Jacobian
PsiSequence phi_sequence(const SigmaContext& ctx, const Vec& u, int max_n);

Complex psi_g2(const SigmaContext& ctx, const CurvePoint& p, int n);

// |lhs - det| / (largest monomial) of the 3x3 determinant recursion
//   psi_2^2 psi_m psi_n psi_{n+m} psi_{m-n} =
//   det [ psi_{m-2}psi_n    psi_{m-1}psi_{n+1}  psi_m psi_{n+2}
//         psi_{m-1}psi_{n-1} psi_m psi_n        psi_{m+1}psi_{n+1}
//         psi_m psi_{n-2}   psi_{m+1}psi_{n-1}  psi_{m+2}psi_n ],
// computed in log space
Real recursion_residual_g2(const PsiSequence& seq, int m, int n);

// elliptic 2x2 pattern: psi_{n+m} psi_{m-n} - (psi_{m-1}psi_{m+1}psi_n^2 -
// psi_{n-1}psi_{n+1}psi_m^2), relative to the largest monomial
Real elliptic_recursion_residual(const PsiSequence& seq, int m, int n);

// same 2x2 pattern with Phi entries (diagnostic)
Real phi_residual(const PsiSequence& seq, int m, int n);

// closed forms of the restriction limits:
//   q(mu,u)    = x^2 - wp12(mu) - x wp22(mu)
//   q_i(mu,u)  = -(wp12i(mu) + x wp22i(mu))
//   q_ij(mu,u) = -(wp12ij(mu) + x wp22ij(mu))
struct QLimit {
  Complex q;
  std::array<Complex, 2> qi{};
  std::array<Complex, 3> qij{};  // by count of index 2
};
QLimit q_limits(const SigmaContext& ctx, const CurvePoint& p, int m);
QLimit q_limit_from_jet(const WpJet& at_mu, Complex x);

// xi quantities on the embedded curve (m > n >= 2):
//   xi0 = psi_2^2 psi_{m-n} psi_{m+n} / (psi_m^2 psi_n^2)
//   xi1(ku) = psi_{k-2} psi_{k+2} / psi_k^2
//   xi2 = the 3-18 combination; xi3(ku,u) by the psi-ratio definition and by
//   the closed form 2q^3 + q12 q - q1 q2 + x (q22 q - q2^2)
struct XiBundle {
  Complex xi0, xi1_m, xi1_n, xi2;
  Complex xi3_m_def, xi3_m_closed, xi3_n_def, xi3_n_closed;
  Complex xi3_m_closed_printed;  // the 3-16 right side as typeset
  Complex xi0_closed, xi1_m_closed, xi1_n_closed, xi2_closed;
  Complex q_m, q_n;            // psi-ratio values of q(mu,u), q(nu,u)
  QLimit qlim_m, qlim_n;       // closed-form q data
  Complex assembly;            // xi0(nu,mu) + xi1(mu) - xi1(nu) + xi2(mu,nu)
  Complex assembly_printed;    // the same with the printed last sign
};
XiBundle xi_bundle(const SigmaContext& ctx, const CurvePoint& p, int m, int n);

// Xi3 on the Jacobian by definition and by the closed form
//   Psi1^6 [2Q^3 + Q11 Q - Q1^2 + wp22(u)(Q12 Q - Q1 Q2) - wp12(u)(Q22 Q - Q2^2)]
// (all Q data at (mu, u)); also returns the printed-form value as diagnostic
struct Xi3Pair {
  Complex definition;
  Complex closed;
  Complex closed_printed;
};
Xi3Pair xi3_jacobian(const SigmaContext& ctx, const Vec& u, int m);

// discrete Painleve I fit: beta_n = psi_{n+1} psi_{n-1} / psi_n^2,
// beta_{n+1} beta_{n-1} = z / beta_n + a / beta_n^2
struct PainleveFit {
  Complex z, a;
  std::map<int, Real> residuals;  // n -> |relation residual| (relative)
};
PainleveFit painleve_fit(const PsiSequence& seq, int n_first, int n_last);

}  // namespace kleinian
