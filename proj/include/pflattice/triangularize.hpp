#pragma once

#include "pflattice/types.hpp"

#include <vector>

namespace pflattice {

struct IdealChain {
  /// Strictly increasing links from the empty ideal to the full ideal.
  std::vector<CoordinateIdeal> links;
  /// True iff the chain has length n+1, i.e. consecutive links differ by one
  /// coordinate (maximal as a chain of closed subspaces).
  bool maximal = false;

  int dim() const { return links.empty() ? 0 : links.front().dim(); }
};

/// Maximal chain of T-invariant coordinate ideals: prefixes of the SCC
/// condensation of T's support digraph in a deterministic topological order
/// (component containing the smallest coordinate first among the available
/// ones). Each consecutive quotient block of T is irreducible.
IdealChain invariant_ideal_chain(const PosMatrix& t,
                                 const Tolerances& tol = Tolerances{});

/// Refine a chain whose consecutive quotient blocks of S vanish into a
/// maximal chain (singleton steps in increasing coordinate order inside each
/// gap). Every link of the result is invariant under S. `scale_floor` widens
/// the block-vanishing threshold for operators with additive roundoff.
IdealChain refine_to_maximal_chain(const IdealChain& chain, const Matrix& s,
                                   const Tolerances& tol = Tolerances{},
                                   double scale_floor = 0.0);

struct NilpotencyCertificate {
  Matrix commutator;              // S = TK - KT
  IdealChain chain;               // maximal, every link S-invariant
  std::vector<int> permuted_form; // coordinate order making S strictly upper
  double radius = 0.0;            // r(S)
  int index = 0;                  // smallest p with ||S^p|| below threshold
};

/// Certify nilpotence of the commutator of a semi-commuting positive pair by
/// an ideal-triangularizing chain. The chain is built for T+K (which leaves
/// it invariant for both operators), the consecutive quotient blocks of S
/// are verified to vanish, and the refined maximal chain triangularizes S.
NilpotencyCertificate commutator_nilpotency(const PosMatrix& t, const PosMatrix& k,
                                            const Tolerances& tol = Tolerances{});

}  // namespace pflattice
