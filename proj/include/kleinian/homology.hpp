#pragma once

#include <vector>

#include "kleinian/curve.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

// One chain segment between consecutive sorted branch points, with the sheet
// fixed by the y value at its midpoint (continued coherently through the
// whole chain from a single anchor).
struct ChainSegment {
  Complex a;
  Complex b;
  Complex y_mid;
};

// Canonical homology data. The 2g chain loops gamma_j (each encircling the
// branch-point pair of segment j) generate H_1; alpha/beta are integer
// combinations with the standard symplectic intersection pairing
// [alpha_i, beta_j] = delta_ij, [alpha,alpha] = [beta,beta] = 0.
struct HomologyBasis {
  BranchData branch;
  std::vector<ChainSegment> segments;  // 2g of them
  IntMat chain_intersection;           // 2g x 2g, exact integers
  IntMat alpha_combo;                  // g x 2g rows of chain-loop coefficients
  IntMat beta_combo;                   // g x 2g
  IntMat basis_intersection;           // 2g x 2g of (alpha..., beta...), == J0

  int genus() const { return static_cast<int>(alpha_combo.rows()); }
};

// A cycle as an integer combination of chain loops, exposed as oriented
// segment uses for inspection and for integrate_differential.
struct Cycle {
  IntVec chain_coefficients;  // length 2g
};

// first-kind (x^{k}/2y, k=0..g-1) and second-kind numerators
struct DifferentialKind {
  enum class Family { first, second };
  Family family = Family::first;
  int index = 1;  // 1-based
};

// numerator polynomial coefficients (low power first) of the chosen
// differential, i.e. du_k = x^{k-1} dx / 2y and
// dr_j = (sum_{k=j}^{2g+1-j} (k+1-j) lambda_{k+1+j} x^k) dx / 2y
Vec differential_numerator(const Curve& curve, const DifferentialKind& kind);

// Chain construction: sort roots by (Re, Im), pair consecutively, track y
// through the chain from a fixed anchor. If the finite cuts cross, re-pair by
// nearest neighbour and retry once. The full build (including the verified
// intersection data, which comes from the period integrals via the bilinear
// identities) lives in build_homology.
HomologyBasis build_homology_chain(const Curve& curve, const BranchData& branch);
HomologyBasis build_homology(const Curve& curve, const BranchData& branch);
HomologyBasis build_homology(const Curve& curve);

// integer symplectic reduction T S T^T = [[0,I],[-I,0]]
IntMat symplectic_reduce(const IntMat& S);

}  // namespace kleinian
