#include "pflattice/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pflattice {

namespace {

using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

constexpr double kPhaseTol = 1e-6;      // phase alignment for the period search
constexpr int kPeriodCap = 2520;        // lcm(1..10)

struct Schur {
  CMatrix t;  // upper triangular
  CMatrix u;  // unitary, a = u t u^*
};

Schur complex_schur(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::ComplexSchur<CMatrix> schur;
  schur.setMaxIterations(100 * std::max(n, 1));
  schur.compute(a.cast<Complex>(), /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw EigensolverFailure(
        "dense eigensolver did not converge within 100*n QR sweeps (n = " +
        std::to_string(n) + ")");
  return {schur.matrixT(), schur.matrixU()};
}

// Swap the adjacent diagonal entries (k, k+1) of the upper triangular factor
// by a unitary similarity. Rotates the eigenvector of the trailing 2x2 block
// into the leading position; requires the two diagonal values to differ.
void swap_adjacent(CMatrix& t, CMatrix& u, int k) {
  const Complex a = t(k, k), b = t(k, k + 1), c = t(k + 1, k + 1);
  const Complex v1 = b, v2 = c - a;
  const double nv = std::sqrt(std::norm(v1) + std::norm(v2));
  if (nv == 0.0)
    throw InternalError("Schur reorder: attempted to swap equal eigenvalues");
  const Complex g1 = v1 / nv, g2 = v2 / nv;
  Eigen::Matrix2cd g;
  g << std::conj(g1), std::conj(g2), -g2, g1;
  t.block(k, 0, 2, t.cols()) = g * t.block(k, 0, 2, t.cols());
  t.block(0, k, t.rows(), 2) = t.block(0, k, t.rows(), 2) * g.adjoint();
  u.block(0, k, u.rows(), 2) = u.block(0, k, u.rows(), 2) * g.adjoint();
  t(k + 1, k) = Complex(0, 0);
  t(k, k) = c;
  t(k + 1, k + 1) = a;
}

// Reorder the Schur form so the selected eigenvalues occupy the leading
// positions, preserving relative order within each group.
void reorder_leading(Schur& s, std::vector<char>& selected) {
  const int n = static_cast<int>(s.t.rows());
  int target = 0;
  for (int i = 0; i < n; ++i) {
    if (!selected[static_cast<size_t>(i)]) continue;
    for (int k = i; k > target; --k) {
      swap_adjacent(s.t, s.u, k - 1);
      std::swap(selected[static_cast<size_t>(k - 1)],
                selected[static_cast<size_t>(k)]);
    }
    ++target;
  }
}

// Spectral projection onto the leading k-dimensional invariant subspace of an
// ordered Schur form: solve T11 Y - Y T22 = -T12 and form U [I, -Y; 0, 0] U^*.
// Returns the projection and the sup norm of Y (a conditioning indicator).
std::pair<Matrix, double> projection_from_schur(const Schur& s, int k) {
  const int n = static_cast<int>(s.t.rows());
  const int m = n - k;
  if (k <= 0) throw InternalError("projection_from_schur: empty spectral set");
  if (m == 0) return {Matrix::Identity(n, n), 0.0};

  const CMatrix t11 = s.t.topLeftCorner(k, k);
  const CMatrix t12 = s.t.topRightCorner(k, m);
  const CMatrix t22 = s.t.bottomRightCorner(m, m);

  // Column-by-column triangular back-substitution for the Sylvester equation.
  CMatrix y(k, m);
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXcd rhs = -t12.col(j);
    for (int i = 0; i < j; ++i) rhs += y.col(i) * t22(i, j);
    for (int r = k - 1; r >= 0; --r) {
      Complex acc = rhs(r);
      for (int c = r + 1; c < k; ++c) acc -= t11(r, c) * y(c, j);
      const Complex denom = t11(r, r) - t22(j, j);
      if (std::abs(denom) == 0.0)
        throw BandSeparationFailure(
            "Sylvester solve: coincident eigenvalues across the split");
      y(r, j) = acc / denom;
    }
  }

  CMatrix pi = CMatrix::Zero(n, n);
  pi.topLeftCorner(k, k) = CMatrix::Identity(k, k);
  pi.topRightCorner(k, m) = -y;
  const CMatrix pc = s.u * pi * s.u.adjoint();
  const double y_norm = y.cwiseAbs().maxCoeff();

  const double imag_norm = pc.imag().cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, pc.real().cwiseAbs().maxCoeff());
  if (imag_norm > 1e-7 * scale * (1.0 + y_norm))
    throw EigensolverFailure("spectral projection has a non-real part of size " +
                             std::to_string(imag_norm));
  return {pc.real(), y_norm};
}

std::vector<Complex> sorted_eigenvalues(const Schur& s) {
  std::vector<Complex> ev(static_cast<size_t>(s.t.rows()));
  for (int i = 0; i < s.t.rows(); ++i) ev[static_cast<size_t>(i)] = s.t(i, i);
  // modulus descending; moduli tied within rounding sort by argument
  std::sort(ev.begin(), ev.end(), [](const Complex& a, const Complex& b) {
    return std::abs(a) > std::abs(b);
  });
  const double tie = ev.empty() ? 0.0 : 1e-12 * std::max(1.0, std::abs(ev.front()));
  size_t start = 0;
  while (start < ev.size()) {
    size_t end = start + 1;
    while (end < ev.size() && std::abs(ev[end - 1]) - std::abs(ev[end]) <= tie) ++end;
    std::sort(ev.begin() + static_cast<long>(start), ev.begin() + static_cast<long>(end),
              [](const Complex& a, const Complex& b) { return std::arg(a) < std::arg(b); });
    start = end;
  }
  return ev;
}

int complex_rank(const CMatrix& a, double rank_tol) {
  Eigen::JacobiSVD<CMatrix> svd(a);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rank_tol) ++rank;
  return rank;
}

// Distinct-value clusters among a set of eigenvalues (union by proximity).
std::vector<std::vector<Complex>> value_clusters(const std::vector<Complex>& ev,
                                                 double merge_tol) {
  std::vector<std::vector<Complex>> clusters;
  for (const Complex& v : ev) {
    bool placed = false;
    for (auto& c : clusters)
      if (std::abs(v - c.front()) <= merge_tol) {
        c.push_back(v);
        placed = true;
        break;
      }
    if (!placed) clusters.push_back({v});
  }
  return clusters;
}

bool peripheral_semisimple_test(const Matrix& a, const std::vector<Complex>& peripheral,
                                double radius, const Tolerances& tol) {
  const int n = static_cast<int>(a.rows());
  const double a_norm = inf_norm(a);
  const double rank_tol = tol.zero * std::max(a_norm, 1e-300) * n;
  const double merge_tol = std::max(1e-12, tol.peripheral_band * radius);
  for (const auto& cluster : value_clusters(peripheral, merge_tol)) {
    Complex mean(0, 0);
    for (const Complex& v : cluster) mean += v;
    mean /= static_cast<double>(cluster.size());
    CMatrix shifted = a.cast<Complex>();
    shifted.diagonal().array() -= mean;
    const int geometric = n - complex_rank(shifted, rank_tol);
    if (geometric < static_cast<int>(cluster.size())) return false;
  }
  return true;
}

// Projection for all eigenvalues with modulus >= cutoff. `gap_required`
// enforces the relative separation demanded by the peripheral band.
Matrix modulus_projection(const Matrix& a, const Schur& schur_in, double cutoff,
                          double gap_required, double* y_norm_out) {
  const int n = static_cast<int>(a.rows());
  Schur s = schur_in;  // reordering mutates
  std::vector<char> selected(static_cast<size_t>(n), 0);
  int k = 0;
  double min_inc = std::numeric_limits<double>::infinity();
  double max_exc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double m = std::abs(s.t(i, i));
    if (m >= cutoff) {
      selected[static_cast<size_t>(i)] = 1;
      ++k;
      min_inc = std::min(min_inc, m);
    } else {
      max_exc = std::max(max_exc, m);
    }
  }
  if (k == 0) throw InternalError("modulus_projection: empty selection");
  if (k == n) {
    if (y_norm_out) *y_norm_out = 0.0;
    return Matrix::Identity(n, n);
  }
  if (min_inc - max_exc < gap_required)
    throw BandSeparationFailure(
        "no relative gap of at least the peripheral band between grouped "
        "moduli (" + std::to_string(min_inc) + ") and excluded moduli (" +
        std::to_string(max_exc) + ")");
  reorder_leading(s, selected);
  auto [p, y_norm] = projection_from_schur(s, k);
  if (y_norm_out) *y_norm_out = y_norm;
  return p;
}

double empirical_growth(const Matrix& a, const Vec& x, int steps) {
  Vec y = x;
  const double nx = vec_inf(y);
  if (nx == 0.0) return 0.0;
  y /= nx;
  double log_sum = 0.0;
  for (int i = 0; i < steps; ++i) {
    y = a * y;
    const double ny = vec_inf(y);
    if (ny == 0.0) return 0.0;  // x annihilated by a finite power
    log_sum += std::log(ny);
    y /= ny;
  }
  return std::exp(log_sum / steps);
}

// Smallest m <= cap aligning every phase: |exp(i*m*theta) - 1| < kPhaseTol.
std::optional<int> phase_alignment_period(const std::vector<Complex>& peripheral) {
  std::vector<double> args;
  args.reserve(peripheral.size());
  for (const Complex& v : peripheral)
    if (std::abs(v) > 0.0) args.push_back(std::arg(v));
  for (int m = 1; m <= kPeriodCap; ++m) {
    bool ok = true;
    for (double th : args) {
      if (std::abs(Complex(std::cos(m * th), std::sin(m * th)) - Complex(1, 0)) >=
          kPhaseTol) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

}  // namespace

SpectrumReport spectrum(const Matrix& a, const Tolerances& tol) {
  tol.validate();
  if (a.rows() != a.cols() || a.rows() < 1)
    throw InvalidArgument("spectrum: matrix must be square and non-empty");
  const Schur s = complex_schur(a);
  SpectrumReport rep;
  rep.eigenvalues = sorted_eigenvalues(s);
  rep.radius = rep.eigenvalues.empty() ? 0.0 : std::abs(rep.eigenvalues.front());
  const double cutoff = rep.radius * (1.0 - tol.peripheral_band);
  for (const Complex& v : rep.eigenvalues)
    if (std::abs(v) >= cutoff) rep.peripheral.push_back(v);
  rep.peripheral_semisimple =
      peripheral_semisimple_test(a, rep.peripheral, rep.radius, tol);
  return rep;
}

double spectral_radius(const Matrix& a, const Tolerances& tol) {
  return spectrum(a, tol).radius;
}

Matrix peripheral_projection(const Matrix& a, const Tolerances& tol) {
  tol.validate();
  const Schur s = complex_schur(a);
  double radius = 0.0;
  for (int i = 0; i < s.t.rows(); ++i)
    radius = std::max(radius, std::abs(s.t(i, i)));
  if (radius <= tol.zero)
    throw QuasiNilpotentInput("spectral radius below tolerance");
  const Matrix p = modulus_projection(a, s, radius * (1.0 - tol.peripheral_band),
                                      tol.peripheral_band * radius, nullptr);
  // Contract checks: idempotence and commutation at the stated tolerances.
  const double p_scale = std::max(1.0, max_abs(p));
  if (max_abs(p * p - p) > 1e-7 * p_scale * p_scale)
    throw EigensolverFailure("peripheral projection failed the idempotence check");
  if (max_abs(p * a - a * p) > 1e-7 * std::max(1.0, inf_norm(a)) * p_scale)
    throw EigensolverFailure("peripheral projection failed the commutation check");
  return p;
}

LocalRadius local_spectral_radius(const Matrix& a, const Vec& x,
                                  const Tolerances& tol) {
  tol.validate();
  if (a.rows() != a.cols() || a.rows() != x.size())
    throw InvalidArgument("local_spectral_radius: dimension mismatch");
  if (vec_inf(x) == 0.0)
    throw InvalidArgument("local_spectral_radius: x must be nonzero");

  const Schur s = complex_schur(a);
  std::vector<double> moduli;
  for (int i = 0; i < s.t.rows(); ++i) moduli.push_back(std::abs(s.t(i, i)));
  std::sort(moduli.begin(), moduli.end(), std::greater<double>());
  const double merge = 1e-9 * std::max(1.0, moduli.front());

  // Distinct modulus bands (top, floor), descending. Bands whose split turns
  // out ill-conditioned in the Sylvester solve are merged with the next band
  // and retried; the reported value is the top of the detected band.
  std::vector<std::pair<double, double>> bands;
  for (double m : moduli) {
    if (bands.empty() || bands.back().second - m > merge)
      bands.emplace_back(m, m);
    else
      bands.back().second = m;
  }

  LocalRadius out;
  out.empirical = empirical_growth(a, x, 64);
  size_t idx = 0;
  while (idx < bands.size()) {
    double y_norm = 0.0;
    bool garbage = false;
    Matrix p;
    try {
      p = modulus_projection(a, s, bands[idx].second - merge, 0.0, &y_norm);
    } catch (const EigensolverFailure&) {
      // Cutting through a cluster of defective noise eigenvalues yields a
      // non-real projection; widen the band instead.
      garbage = true;
    }
    if ((garbage || y_norm > 1e7) && idx + 1 < bands.size()) {
      bands[idx].second = bands[idx + 1].second;
      bands.erase(bands.begin() + static_cast<long>(idx) + 1);
      continue;
    }
    if (!garbage) {
      const double detect = tol.zero * vec_inf(x) * (1.0 + y_norm);
      if (vec_inf(p * x) > detect) {
        out.exact = bands[idx].first;
        return out;
      }
    }
    ++idx;
  }
  out.exact = 0.0;  // all spectral components of x vanish only for x = 0
  return out;
}

LocalRadius dual_local_spectral_radius(const Matrix& a, const Vec& xstar,
                                       const Tolerances& tol) {
  return local_spectral_radius(a.transpose(), xstar, tol);
}

NormalizedPower normalized_power(const Matrix& a, unsigned long long e) {
  const int n = static_cast<int>(a.rows());
  if (e == 0)
    return {Matrix::Identity(n, n), 0.0};
  Matrix base = a;
  double base_log = 0.0;
  {
    const double nb = max_abs(base);
    if (nb == 0.0) return {Matrix::Zero(n, n), -std::numeric_limits<double>::infinity()};
    base /= nb;
    base_log = std::log(nb);
  }
  Matrix acc;
  double acc_log = 0.0;
  bool have_acc = false;
  while (e > 0) {
    if (e & 1ULL) {
      if (!have_acc) {
        acc = base;
        acc_log = base_log;
        have_acc = true;
      } else {
        acc = acc * base;
        const double na = max_abs(acc);
        if (na == 0.0)
          return {Matrix::Zero(n, n), -std::numeric_limits<double>::infinity()};
        acc /= na;
        acc_log += base_log + std::log(na);
      }
    }
    e >>= 1;
    if (e == 0) break;
    base = base * base;
    const double nb = max_abs(base);
    if (nb == 0.0) {
      if (!have_acc)
        return {Matrix::Zero(n, n), -std::numeric_limits<double>::infinity()};
      // remaining factors are zero matrices
      return {Matrix::Zero(n, n), -std::numeric_limits<double>::infinity()};
    }
    base /= nb;
    base_log = 2.0 * base_log + std::log(nb);
  }
  return {acc, acc_log};
}

namespace {

Matrix plain_power(const Matrix& a, unsigned long long e) {
  const NormalizedPower np = normalized_power(a, e);
  if (!std::isfinite(np.log_norm)) return Matrix::Zero(a.rows(), a.cols());
  return np.direction * std::exp(np.log_norm);
}

}  // namespace

DichotomyResult power_dichotomy(const PosMatrix& a_in, const Tolerances& tol) {
  tol.validate();
  const Matrix& a = a_in.mat();
  const int n = a_in.n();
  const SpectrumReport rep = spectrum(a, tol);
  if (rep.radius <= tol.zero)
    throw QuasiNilpotentInput("spectral radius below tolerance");
  const Matrix ahat = a / rep.radius;

  const std::optional<int> m_opt = phase_alignment_period(rep.peripheral);
  if (!m_opt)
    throw DichotomyUndetected(
        "no peripheral phase alignment found with period up to " +
        std::to_string(kPeriodCap));
  const int m = *m_opt;

  DichotomyResult out;
  out.subsequence_period = m;

  if (rep.peripheral_semisimple) {
    out.kind = DichotomyKind::ProjectionLimit;
    out.limit = peripheral_projection(a, tol);

    // Target power: subdominant decay rho^(N*m) down to 1e-8 over an estimated
    // conditioning factor, then verify at N and 2N (escalating twice if the
    // non-normal transient is larger than estimated).
    double rho = 0.0;
    const double cutoff = rep.radius * (1.0 - tol.peripheral_band);
    for (const auto& v : rep.eigenvalues) {
      const double mod = std::abs(v) / rep.radius;
      if (std::abs(v) < cutoff) rho = std::max(rho, mod);
    }
    long long target = 1;
    const double cond = 10.0 * std::max(1.0, max_abs(out.limit));
    if (rho > 0.0) {
      const double need = std::log(1e-8 / cond) / (m * std::log(rho));
      target = std::max<long long>(1, static_cast<long long>(std::ceil(need)));
    }
    bool ok = false;
    for (int attempt = 0; attempt < 3 && !ok; ++attempt, target *= 4) {
      const Matrix pw1 = plain_power(ahat, static_cast<unsigned long long>(target) *
                                               static_cast<unsigned long long>(m));
      const Matrix pw2 = plain_power(ahat, 2ULL * static_cast<unsigned long long>(target) *
                                               static_cast<unsigned long long>(m));
      if (inf_norm(pw1 - out.limit) <= 1e-6 && inf_norm(pw2 - out.limit) <= 1e-6) {
        out.verified_power = target;
        ok = true;
      }
    }
    if (!ok)
      throw DichotomyUndetected(
          "scaled powers did not converge to the peripheral projection within "
          "the escalated power budget");
    return out;
  }

  // Defective peripheral part: scaled powers grow polynomially and the
  // normalized subsequence A^(m*j)/||A^(m*j)|| converges to the direction of
  // the top nilpotent term. Evaluate it far out along the commuting factor
  // H = (A/r)^m restricted by the peripheral projection.
  out.kind = DichotomyKind::NilpotentLimit;
  const Matrix p = peripheral_projection(a, tol);
  const Matrix h = plain_power(ahat, static_cast<unsigned long long>(m)) * p;

  const unsigned long long j1 = 1ULL << 39, j2 = 1ULL << 40;
  const NormalizedPower w1 = normalized_power(h, j1);
  const NormalizedPower w2 = normalized_power(h, j2);
  if (!std::isfinite(w1.log_norm) || !std::isfinite(w2.log_norm))
    throw DichotomyUndetected("peripheral power vanished unexpectedly");
  if (max_abs(w2.direction - w1.direction) > 1e-7)
    throw DichotomyUndetected(
        "no convergent normalized power subsequence within the power cap");
  Matrix direction = w2.direction;
  if (max_abs(direction) <= tol.zero)
    throw DichotomyUndetected("normalized power limit vanished");

  // Certify nilpotence of the limit.
  const Matrix dn = plain_power(direction, static_cast<unsigned long long>(n));
  if (inf_norm(dn) > 1e-7)
    throw InternalError("nilpotent power limit failed the nilpotence check");

  const double growth = (w2.log_norm - w1.log_norm) / std::log(2.0);
  int degree = static_cast<int>(std::lround(growth));
  degree = std::max(0, std::min(degree, n - 1));
  out.scaling_exponent = degree;
  out.limit = direction;
  return out;
}

}  // namespace pflattice
