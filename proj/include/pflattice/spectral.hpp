#pragma once

#include "pflattice/types.hpp"

#include <complex>
#include <optional>

namespace pflattice {

struct SpectrumReport {
  /// All n eigenvalues with multiplicity, ordered by (modulus desc, arg asc).
  std::vector<std::complex<double>> eigenvalues;
  /// Spectral radius: max modulus over eigenvalues (0 for the nilpotent case).
  double radius = 0.0;
  /// Eigenvalues with |lambda| >= radius * (1 - peripheral_band).
  std::vector<std::complex<double>> peripheral;
  /// True iff every peripheral eigenvalue has equal algebraic and geometric
  /// multiplicity (rank tests at tolerance tol.zero * ||A||_inf * n).
  bool peripheral_semisimple = false;
};

SpectrumReport spectrum(const Matrix& a, const Tolerances& tol = Tolerances{});
inline SpectrumReport spectrum(const PosMatrix& a,
                               const Tolerances& tol = Tolerances{}) {
  return spectrum(a.mat(), tol);
}

double spectral_radius(const Matrix& a, const Tolerances& tol = Tolerances{});
inline double spectral_radius(const PosMatrix& a,
                              const Tolerances& tol = Tolerances{}) {
  return spectral_radius(a.mat(), tol);
}

/// Spectral projection P for the peripheral spectrum, computed from an ordered
/// Schur decomposition (peripheral eigenvalues reordered to lead, Sylvester
/// solve for the splitting). Postconditions: P^2 = P, PA = AP, the spectrum of
/// A on range(P) is the peripheral spectrum, and P is real.
Matrix peripheral_projection(const Matrix& a, const Tolerances& tol = Tolerances{});
inline Matrix peripheral_projection(const PosMatrix& a,
                                    const Tolerances& tol = Tolerances{}) {
  return peripheral_projection(a.mat(), tol);
}

struct LocalRadius {
  /// Largest |lambda| over spectral components of x with nonzero projection.
  double exact = 0.0;
  /// ||A^N x||^(1/N) for N = 64, computed with renormalized iteration.
  double empirical = 0.0;
};

/// Local spectral radius of A at x (x != 0).
LocalRadius local_spectral_radius(const Matrix& a, const Vec& x,
                                  const Tolerances& tol = Tolerances{});
inline LocalRadius local_spectral_radius(const PosMatrix& a, const Vec& x,
                                         const Tolerances& tol = Tolerances{}) {
  return local_spectral_radius(a.mat(), x, tol);
}

/// Dual variant: local spectral radius of the adjoint at a functional.
LocalRadius dual_local_spectral_radius(const Matrix& a, const Vec& xstar,
                                       const Tolerances& tol = Tolerances{});
inline LocalRadius dual_local_spectral_radius(
    const PosMatrix& a, const Vec& xstar, const Tolerances& tol = Tolerances{}) {
  return dual_local_spectral_radius(a.mat(), xstar, tol);
}

enum class DichotomyKind { ProjectionLimit, NilpotentLimit };

struct DichotomyResult {
  DichotomyKind kind = DichotomyKind::ProjectionLimit;
  /// ProjectionLimit: the peripheral spectral projection P (limit of scaled
  /// powers along multiples of the period). NilpotentLimit: the sup-norm
  /// normalized limiting direction, a nonzero nilpotent matrix.
  Matrix limit;
  /// ProjectionLimit: smallest m with all peripheral phases aligned at m.
  std::optional<int> subsequence_period;
  /// NilpotentLimit: polynomial growth degree of ||(A/r)^N||.
  std::optional<int> scaling_exponent;
  /// ProjectionLimit: exponent N with ||(A/r)^(N*m) - P||_inf <= 1e-6.
  std::optional<long long> verified_power;
};

/// Power dichotomy for A with r(A) > tol.zero: scaled powers of A either
/// converge to the peripheral projection along multiples of a period, or a
/// normalized subsequence converges to a nonzero nilpotent direction.
DichotomyResult power_dichotomy(const PosMatrix& a,
                                const Tolerances& tol = Tolerances{});

/// A^e by binary exponentiation with sup-norm renormalization; returns the
/// normalized matrix and log of the true sup norm.
struct NormalizedPower {
  Matrix direction;  // sup-norm 1 unless the power vanishes
  double log_norm;   // log ||A^e||_inf (-inf if the power is exactly 0)
};
NormalizedPower normalized_power(const Matrix& a, unsigned long long e);

}  // namespace pflattice
