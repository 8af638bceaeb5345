#pragma once

#include <string>
#include <vector>

#include "kleinian/report.hpp"
#include "kleinian/sigma.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

// one monomial: coeff * prod lambda_k^{lam_pow[k]} * prod wp_{multi-index}
struct IdentityTerm {
  Real coeff = 0;
  std::array<int, 6> lam_pow{};        // exponents of lambda_0..lambda_5
  std::vector<MultiIndex> wp_factors;  // each a sorted 2..4 long index list (0-based)
};

// sum of terms that should vanish on the Jacobian
struct Identity {
  std::string name;      // e.g. "H-2 (corrected)"
  std::string equation;  // e.g. "2-15"
  bool gating = false;
  std::vector<IdentityTerm> terms;
};

// residual relative to the largest term magnitude
Real identity_residual(const Identity& id, const Vec& lambdas, const WpJet& jet);

// the genus-2 quartic/cubic wp relations: corrected forms (gating) and the
// printed forms (diagnostics; undefined symbols enter as zero)
const std::vector<Identity>& wp_identity_registry();

// evaluates every registered identity at u (off the theta divisor)
std::vector<ResidualReport> identity_registry(const SigmaContext& ctx, const Vec& u,
                                              const std::string& inputs_digest);

}  // namespace kleinian
