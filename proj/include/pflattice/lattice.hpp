#pragma once

#include "pflattice/types.hpp"

#include <optional>

namespace pflattice {

/// Support of a vector: { i : |v_i| > tol.zero }.
CoordinateIdeal support_of(const Vec& v, const Tolerances& tol = Tolerances{});

/// Union of supports; for a set of vectors this is the generated ideal.
CoordinateIdeal support_of(const std::vector<Vec>& vs,
                           const Tolerances& tol = Tolerances{});

/// True iff A * I_S is contained in I_S, i.e. A(i,j) <= tol.zero for every
/// i outside S and j inside S.
bool is_invariant_ideal(const PosMatrix& a, const CoordinateIdeal& s,
                        const Tolerances& tol = Tolerances{});

/// Same test for a general real matrix, using |A(i,j)| <= threshold. The
/// threshold defaults to tol.zero and can be widened for scaled operators.
bool is_invariant_ideal(const Matrix& a, const CoordinateIdeal& s,
                        double threshold);

struct QuasiInteriorResult {
  bool quasi_interior = false;
  /// 0-based index of the first entry <= tol.zero when not quasi-interior.
  std::optional<int> violation_index;
  explicit operator bool() const { return quasi_interior; }
};

/// In R^n a quasi-interior point is exactly a strictly positive vector.
/// Requires v >= 0 entrywise.
QuasiInteriorResult is_quasi_interior(const Vec& v,
                                      const Tolerances& tol = Tolerances{});

}  // namespace pflattice
