#pragma once

#include "pflattice/perron.hpp"
#include "pflattice/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pflattice {

/// Side of a semi-commutation inequality for A >= 0:
///   Right: A K >= K A (the super right-commutant of K),
///   Left:  A K <= K A (the super left-commutant of K).
enum class Side { Right, Left };

inline const char* side_name(Side s) { return s == Side::Right ? "right" : "left"; }

struct FeasibilityResult {
  bool feasible = false;
  std::optional<PosMatrix> witness;  // present iff feasible
};

/// Decide whether some A >= 0 with A(i,j) = 1 satisfies the side's
/// semi-commutation inequality entrywise (within lp_eps). Indices 0-based.
FeasibilityResult semi_commutant_feasible(const PosMatrix& k, Side side, int i,
                                          int j, const Tolerances& tol = Tolerances{});

struct CommutantRelation {
  Side side = Side::Right;
  int n = 0;
  /// edges(i,j) true iff some member of the side has entry (i,j) > 0.
  std::vector<std::vector<bool>> edges;
  /// Witness per true edge, populated on request.
  std::vector<std::vector<std::optional<PosMatrix>>> witnesses;

  bool edge(int i, int j) const { return edges[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
};

/// Elementwise reachability relation of the super (right/left) commutant,
/// decided by one feasibility LP per entry. The result is asserted reflexive
/// and transitively closed; a violation indicates a solver bug.
CommutantRelation super_commutant_relation(const PosMatrix& k, Side side,
                                           const Tolerances& tol = Tolerances{},
                                           bool keep_witnesses = false);

/// Ideal irreducibility of the whole super-commutant: the relation digraph
/// must be strongly connected. The reducible case returns a coordinate ideal
/// invariant under every member of the side.
IrreducibilityCertificate is_super_commutant_irreducible(
    const PosMatrix& k, Side side, const Tolerances& tol = Tolerances{});

struct GapResult {
  /// Maximum of sum(AK - KA) over A >= 0 in the right cone with sum(A) = 1;
  /// zero certifies that the super right-commutant is contained in the
  /// commutant. gap_left is the mirrored quantity.
  double gap_right = 0.0;
  double gap_left = 0.0;
  std::optional<PosMatrix> witness_right;
  std::optional<PosMatrix> witness_left;
};

GapResult commutant_equality_gap(const PosMatrix& k,
                                 const Tolerances& tol = Tolerances{});

/// Exact-rational gaps for pinning golden outcomes (n <= 6). Returns the two
/// optima as exact decimal fraction strings "p/q".
std::pair<std::string, std::string> commutant_equality_gap_exact(
    const PosMatrix& k);

struct SampleResult {
  std::vector<PosMatrix> samples;
  /// True when the cone degenerated to scalar multiples of the structural
  /// members (identity and K); only those are returned then.
  bool degenerate = false;
};

/// Deterministic-for-seed samples from the side's cone: LP vertex solutions
/// under random nonnegative objectives plus random convex combinations. The
/// output always includes the identity and K itself (count permitting).
SampleResult sample_semi_commuting(const PosMatrix& k, Side side, uint64_t seed,
                                   int count, const Tolerances& tol = Tolerances{});

}  // namespace pflattice
