#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace pflattice {

using Vec = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure mode the library reports is one of these; the
// CLI maps them onto its exit codes.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input file (bad JSON/CSV, ragged rows, negative entries).
struct ParseError : Error {
  using Error::Error;
};

/// Invalid call arguments or configuration (empty matrix list, trials < 1, ...).
struct InvalidArgument : Error {
  using Error::Error;
};

/// A documented operation precondition does not hold for the given inputs.
struct PreconditionViolation : Error {
  using Error::Error;
};

/// Spectral radius of the input is below tolerance where positivity is required.
struct QuasiNilpotentInput : Error {
  using Error::Error;
};

/// Peripheral eigenvalue group cannot be separated from the rest of the spectrum.
struct BandSeparationFailure : Error {
  using Error::Error;
};

/// The dense eigensolver did not converge within its iteration cap.
struct EigensolverFailure : Error {
  using Error::Error;
};

/// The structural hypothesis behind the peripheral cycle extraction fails for
/// this operator (defective peripheral part, negative projection entries,
/// ambiguous clustering, or no permutation match).
struct HypothesisViolated : Error {
  using Error::Error;
};

/// LP solver exceeded its iteration cap or produced an inconsistent relation.
struct SolverFailure : Error {
  using Error::Error;
};

/// No convergent power subsequence was detected within the power cap.
struct DichotomyUndetected : Error {
  using Error::Error;
};

/// A consecutive-quotient block of the commutator is not zero.
struct QuotientNotScalarZero : Error {
  using Error::Error;
};

/// The instance is outside the numeric envelope of the fixed tolerances
/// (entries that are mathematically positive fall below the zero threshold).
struct ConditioningFailure : Error {
  using Error::Error;
};

/// A mathematically guaranteed internal invariant failed; indicates a bug.
struct InternalError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

struct Tolerances {
  /// Absolute threshold below which an entry is treated as zero.
  double zero = 1e-9;
  /// Relative modulus gap used to group peripheral eigenvalues.
  double peripheral_band = 1e-6;
  /// Cosine-distance threshold for proportionality clustering.
  double cluster = 1e-8;
  /// Feasibility slack for LP certificates.
  double lp_eps = 1e-9;
  /// Relative slack for commuting/semi-commuting preconditions.
  double commuting = 1e-8;

  void validate() const {
    if (!(zero > 0.0 && zero < 1.0))
      throw InvalidArgument("Tolerances: zero must lie in (0, 1)");
    if (!(peripheral_band > 0.0) || !(cluster > 0.0) || !(lp_eps > 0.0) ||
        !(commuting > 0.0))
      throw InvalidArgument("Tolerances: all thresholds must be positive");
  }

  /// Defaults, with `zero` optionally overridden by PF_LATTICE_TOL.
  static Tolerances from_env();
};

// ---------------------------------------------------------------------------
// CoordinateIdeal: a subset S of {1..n} encoding the ideal spanned by {e_i}.
// Indices are 0-based internally; serializers shift to 1-based.
// ---------------------------------------------------------------------------

class CoordinateIdeal {
 public:
  CoordinateIdeal() = default;
  explicit CoordinateIdeal(int n) : n_(check_dim(n)), in_(n, 0) {}

  static CoordinateIdeal empty(int n) { return CoordinateIdeal(n); }

  static CoordinateIdeal full(int n) {
    CoordinateIdeal s(n);
    std::fill(s.in_.begin(), s.in_.end(), char(1));
    return s;
  }

  static CoordinateIdeal of(int n, const std::vector<int>& indices) {
    CoordinateIdeal s(n);
    for (int i : indices) s.add(i);
    return s;
  }

  int dim() const { return n_; }

  int size() const {
    return static_cast<int>(std::count(in_.begin(), in_.end(), char(1)));
  }

  bool contains(int i) const {
    return i >= 0 && i < n_ && in_[static_cast<size_t>(i)] != 0;
  }

  void add(int i) {
    if (i < 0 || i >= n_)
      throw InvalidArgument("CoordinateIdeal: index out of range");
    in_[static_cast<size_t>(i)] = 1;
  }

  bool is_empty() const { return size() == 0; }
  bool is_full() const { return size() == n_; }
  bool is_trivial() const { return is_empty() || is_full(); }

  bool is_subset_of(const CoordinateIdeal& other) const {
    if (n_ != other.n_) return false;
    for (int i = 0; i < n_; ++i)
      if (contains(i) && !other.contains(i)) return false;
    return true;
  }

  CoordinateIdeal united(const CoordinateIdeal& other) const {
    if (n_ != other.n_)
      throw InvalidArgument("CoordinateIdeal: dimension mismatch");
    CoordinateIdeal s(n_);
    for (int i = 0; i < n_; ++i)
      if (contains(i) || other.contains(i)) s.add(i);
    return s;
  }

  /// Sorted 0-based member indices.
  std::vector<int> indices() const {
    std::vector<int> out;
    for (int i = 0; i < n_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const CoordinateIdeal& a, const CoordinateIdeal& b) {
    return a.n_ == b.n_ && a.in_ == b.in_;
  }

 private:
  static int check_dim(int n) {
    if (n < 1) throw InvalidArgument("CoordinateIdeal: dimension must be >= 1");
    return n;
  }

  int n_ = 0;
  std::vector<char> in_;
};

// ---------------------------------------------------------------------------
// PosMatrix: dense entrywise-nonnegative n x n operator, n >= 2. Entries in
// (-tol.zero, 0) are clamped to 0 at construction; anything more negative is
// rejected. Immutable after construction.
// ---------------------------------------------------------------------------

class PosMatrix {
 public:
  PosMatrix(Matrix entries, const Tolerances& tol = Tolerances{})
      : m_(std::move(entries)) {
    tol.validate();
    if (m_.rows() != m_.cols())
      throw InvalidArgument("PosMatrix: matrix must be square");
    if (m_.rows() < 2)
      throw InvalidArgument("PosMatrix: dimension must be at least 2");
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = 0; j < m_.cols(); ++j) {
        double v = m_(i, j);
        if (!std::isfinite(v))
          throw InvalidArgument("PosMatrix: entries must be finite");
        if (v < 0.0) {
          if (v <= -tol.zero)
            throw InvalidArgument("PosMatrix: negative entry at (" +
                                  std::to_string(i + 1) + "," +
                                  std::to_string(j + 1) + ")");
          m_(i, j) = 0.0;
        }
      }
  }

  static PosMatrix from_rows(const std::vector<std::vector<double>>& rows,
                             const Tolerances& tol = Tolerances{}) {
    const auto n = rows.size();
    Matrix m(n, n);
    for (size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n)
        throw InvalidArgument("PosMatrix: ragged rows");
      for (size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return PosMatrix(std::move(m), tol);
  }

  static PosMatrix identity(int n) { return PosMatrix(Matrix::Identity(n, n)); }

  int n() const { return static_cast<int>(m_.rows()); }
  const Matrix& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

// ---------------------------------------------------------------------------
// Norm helpers used throughout. For matrices, inf_norm is the operator
// infinity norm (max absolute row sum); max_abs is the entrywise maximum.
// ---------------------------------------------------------------------------

inline double inf_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double max_abs(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

inline double vec_inf(const Vec& v) {
  if (v.size() == 0) return 0.0;
  return v.cwiseAbs().maxCoeff();
}

}  // namespace pflattice
