#pragma once

#include "pflattice/types.hpp"

#include <optional>

namespace pflattice {

struct IrreducibilityCertificate {
  bool irreducible = false;
  /// Present iff reducible: a nontrivial coordinate ideal invariant under
  /// every input matrix.
  std::optional<CoordinateIdeal> witness;
};

/// Ideal irreducibility of a collection of positive operators, decided on the
/// union support digraph (edge j -> i iff some matrix has entry (i,j) above
/// tol.zero): irreducible iff strongly connected.
IrreducibilityCertificate is_ideal_irreducible(
    const std::vector<PosMatrix>& matrices, const Tolerances& tol = Tolerances{});

inline IrreducibilityCertificate is_ideal_irreducible(
    const PosMatrix& a, const Tolerances& tol = Tolerances{}) {
  return is_ideal_irreducible(std::vector<PosMatrix>{a}, tol);
}

struct PerronPair {
  double radius = 0.0;
  Vec x0;      // right eigenvector, strictly positive, ||x0||_1 = 1
  Vec x0star;  // left eigenvector, strictly positive, x0star(x0) = 1
};

/// Perron eigendata of an ideal irreducible matrix: A x0 = r x0 and
/// A^T x0star = r x0star with both vectors strictly positive, r > 0 and both
/// eigenspaces one-dimensional (asserted by rank tests).
PerronPair perron_pair(const PosMatrix& a, const Tolerances& tol = Tolerances{});

struct PeripheralStructure {
  double radius = 0.0;          // r(K) > 0
  Matrix projection;            // peripheral spectral projection P
  int rank = 0;                 // r = rank(P)
  std::vector<Vec> vectors;     // x_1..x_r, nonnegative, disjoint supports
  std::vector<Vec> functionals; // x_1*..x_r*, nonnegative, disjoint supports
  std::vector<int> permutation; // pi, 0-based: K x_i = r * x_pi(i)
  int period = 0;               // m = order of pi
  Vec x0;                       // sum of the x_i, quasi-interior
  Vec x0star;                   // sum of the x_i*, strictly positive
  long long verified_power = 0; // N with ||(K/r)^(N m) - P||_inf <= 1e-6
  Matrix source;                // the analyzed operator K
};

/// Extract the full peripheral permutation structure of K. Requires r(K) > 0,
/// a semisimple peripheral part and an entrywise nonnegative peripheral
/// projection; violations raise HypothesisViolated.
PeripheralStructure peripheral_cycle_structure(const PosMatrix& k,
                                               const Tolerances& tol = Tolerances{});

/// For ideal irreducible T: rescale T to T/(2 ||T||_inf) and return the
/// Neumann series sum_{k>=1} T^k = (I - T)^{-1} T, a strictly positive matrix.
PosMatrix strongly_expanding_sum(const PosMatrix& t,
                                 const Tolerances& tol = Tolerances{});

struct CommonEigenpair {
  Vec x0;          // common eigenvector, strictly positive
  Vec x0star;      // common dual eigenvector, strictly positive
  double lambda_t; // T x0 = lambda_t x0, 0 < lambda_t <= r(T)
  double mu_k;     // K x0 = mu_k x0 = r(K) x0
};

/// Common positive eigenpair of a commuting pair (T irreducible, K != 0),
/// built from the Perron pair of the strictly positive conjugate
/// sandwich(T) * K * sandwich(T).
CommonEigenpair common_peripheral_eigenpair(const PosMatrix& t, const PosMatrix& k,
                                            const Tolerances& tol = Tolerances{});

struct CommutingEigenvalue {
  double lambda = 0.0;  // Perron value of the compressed r x r matrix
  Vec x;                // nonnegative eigenvector, S x = lambda x
  Vec xstar;            // nonnegative dual eigenvector, S^T xstar = lambda xstar
};

/// Positive eigenpair of an operator S commuting with the structured K: the
/// compression M_ij = x_i*(S x_j) is nonnegative; its Perron pair lifts to
/// eigenvectors of S through the peripheral frame.
CommutingEigenvalue commuting_eigenvalue(const PosMatrix& s,
                                         const PeripheralStructure& structure,
                                         const Tolerances& tol = Tolerances{});

/// Nonnegative right eigenvector of a (possibly reducible) nonnegative matrix
/// for its spectral radius, normalized to unit l1 norm. Deterministic.
Vec nonneg_perron_vector(const Matrix& m, double radius,
                         const Tolerances& tol = Tolerances{});

}  // namespace pflattice
