#include "pflattice/verify.hpp"

#include "pflattice/lattice.hpp"
#include "pflattice/perron.hpp"
#include "pflattice/spectral.hpp"
#include "pflattice/triangularize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace pflattice {

namespace {

// ---------------------------------------------------------------------------
// Deterministic randomness. All draws go through this wrapper so reports are
// reproducible bit for bit across runs with the same configuration.
// ---------------------------------------------------------------------------

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}

  uint64_t raw() { return eng(); }
  double u01() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }  // [0,1)
  double unit_open() { return 1.0 - u01(); }                             // (0,1]
  double uniform(double a, double b) { return a + (b - a) * u01(); }
  int below(int k) { return static_cast<int>(eng() % static_cast<uint64_t>(k)); }

  std::vector<int> shuffled(int n) {
    std::vector<int> p(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[static_cast<size_t>(i)], p[static_cast<size_t>(below(i + 1))]);
    return p;
  }
};

uint64_t splitmix(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t mix_seed(uint64_t seed, const std::string& name, uint64_t trial) {
  uint64_t h = 1469598103934665603ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return splitmix(splitmix(seed) ^ splitmix(trial) ^ h);
}

Vec random_positive_vec(int n, Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = 0.1 + rng.u01();
  return v;
}

PosMatrix random_nonneg(int n, double density, Rng& rng, const Tolerances& tol) {
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rng.u01() < density) m(i, j) = rng.unit_open();
  if (max_abs(m) == 0.0) m(rng.below(n), rng.below(n)) = rng.unit_open();
  return PosMatrix(m, tol);
}

// ---------------------------------------------------------------------------
// Trial plumbing
// ---------------------------------------------------------------------------

enum class TrialStatus { Pass, Fail, Skip };

struct TrialOutcome {
  TrialStatus status = TrialStatus::Pass;
  double margin = 0.0;
  std::string detail;
  std::vector<std::pair<std::string, Matrix>> payload;
};

struct TrialContext {
  int n = 0;
  int trial = 0;
  uint64_t trial_seed = 0;
  Tolerances tol;
  Rng rng;
  /// Generated instance, recorded as soon as it exists so that failures
  /// thrown mid-check still carry a replayable payload.
  std::vector<std::pair<std::string, Matrix>> instance;

  void note(const char* name, const Matrix& m) { instance.emplace_back(name, m); }
};

TrialOutcome pass_with(double margin) {
  TrialOutcome o;
  o.status = margin < 0.0 ? TrialStatus::Fail : TrialStatus::Pass;
  o.margin = margin;
  return o;
}

TrialOutcome skip(std::string reason) {
  TrialOutcome o;
  o.status = TrialStatus::Skip;
  o.detail = std::move(reason);
  return o;
}

void attach(TrialOutcome& o, const char* name, const Matrix& m) {
  o.payload.emplace_back(name, m);
}

double rel_residual(const Vec& lhs, double scale) {
  return vec_inf(lhs) / std::max(scale, 1e-300);
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

// Positivity of the spectral radius under (super-commutant) irreducibility:
// an irreducible K has an irreducible super right-commutant, so r(K) > 0.
TrialOutcome prop_turo(TrialContext& ctx) {
  const PosMatrix k = random_irreducible(ctx.n, ctx.rng.uniform(0.0, 0.5), ctx.rng.raw());
  ctx.note("K", k.mat());
  const double r = spectral_radius(k, ctx.tol);
  TrialOutcome o = pass_with(r - ctx.tol.zero);
  if (o.status == TrialStatus::Fail) {
    o.detail = "irreducible operator with vanishing spectral radius";
    attach(o, "K", k.mat());
  }
  return o;
}

// A shared quasi-interior eigenpair turns semi-commutation into commutation.
TrialOutcome prop_scc(TrialContext& ctx) {
  const PosMatrix u = random_irreducible(ctx.n, ctx.rng.uniform(0.1, 0.5), ctx.rng.raw());
  ctx.note("U", u.mat());
  // the shared eigenpair of the hypothesis, built through the sandwich
  const CommonEigenpair pair = common_peripheral_eigenpair(u, u, ctx.tol);
  if (!is_quasi_interior(pair.x0, ctx.tol))
    return skip("shared eigenvector not strictly positive at tolerance");
  const Side side = (ctx.trial % 2 == 0) ? Side::Right : Side::Left;
  const SampleResult s = sample_semi_commuting(u, side, ctx.rng.raw(), 4, ctx.tol);
  const PosMatrix& v = s.samples.back();
  const double bound = 1e-7 * inf_norm(u.mat()) * std::max(inf_norm(v.mat()), 1e-300);
  const double comm = inf_norm(u.mat() * v.mat() - v.mat() * u.mat());
  TrialOutcome o = pass_with(bound - comm);
  if (o.status == TrialStatus::Fail) {
    o.detail = "semi-commuting partner fails to commute";
    attach(o, "U", u.mat());
    attach(o, "V", v.mat());
  }
  return o;
}

// Local spectral radii dominate the eigenvalue of a quasi-interior eigenvector.
TrialOutcome prop_locaq(TrialContext& ctx) {
  const PosMatrix a = random_irreducible(ctx.n, ctx.rng.uniform(0.1, 0.6), ctx.rng.raw());
  ctx.note("A", a.mat());
  const double lambda = perron_pair(a, ctx.tol).radius;
  double margin = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 2; ++rep) {
    const Vec xstar = random_positive_vec(ctx.n, ctx.rng);
    const Vec x = random_positive_vec(ctx.n, ctx.rng);
    margin = std::min(margin, dual_local_spectral_radius(a, xstar, ctx.tol).exact -
                                  (lambda - 1e-9));
    margin = std::min(margin, local_spectral_radius(a, x, ctx.tol).exact -
                                  (lambda - 1e-9));
  }
  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "local spectral radius below the shared eigenvalue";
    attach(o, "A", a.mat());
  }
  return o;
}

// The full peripheral structure: frame extraction, power convergence, local
// radii, commutant collapse and eigenpairs of commuting partners.
TrialOutcome prop_hyper(TrialContext& ctx) {
  const PosMatrix k = random_peripheral_structured(ctx.n, ctx.rng.raw());
  ctx.note("K", k.mat());
  const PeripheralStructure st = peripheral_cycle_structure(k, ctx.tol);
  const double r = st.radius;
  const Matrix khat = k.mat() / r;
  double margin = std::numeric_limits<double>::infinity();

  // (2) power convergence at the verified exponent
  {
    const NormalizedPower np = normalized_power(
        khat, static_cast<unsigned long long>(st.verified_power) *
                  static_cast<unsigned long long>(st.period));
    const Matrix power = np.direction * std::exp(np.log_norm);
    margin = std::min(margin, 1e-6 - inf_norm(power - st.projection));
  }
  // (4) local spectral radii equal r for positive vectors, both sides
  for (int rep = 0; rep < 2; ++rep) {
    const Vec x = random_positive_vec(ctx.n, ctx.rng);
    const Vec xstar = random_positive_vec(ctx.n, ctx.rng);
    margin = std::min(margin,
                      1e-9 * r - std::abs(local_spectral_radius(k, x, ctx.tol).exact - r));
    margin = std::min(margin, 1e-9 * r - std::abs(dual_local_spectral_radius(
                                              k, xstar, ctx.tol).exact - r));
  }
  // (4) bounded scaled orbits
  {
    Vec y = random_positive_vec(ctx.n, ctx.rng);
    const double y0 = vec_inf(y);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int j = 0; j < 40; ++j) {
      y = khat * y;
      const double ratio = vec_inf(y) / y0;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    margin = std::min(margin, lo - 1e-12);
    margin = std::min(margin, 1e12 - hi);
  }
  // (5) commutant collapse
  {
    const GapResult gaps = commutant_equality_gap(k, ctx.tol);
    const double bound = 1e-7 * std::max(1.0, inf_norm(k.mat()));
    margin = std::min(margin, bound - std::max(gaps.gap_right, gaps.gap_left));
  }
  // (6) eigenpair of a commuting partner through the compression
  {
    const SampleResult s = sample_semi_commuting(k, Side::Right, ctx.rng.raw(), 3, ctx.tol);
    const PosMatrix& partner = s.samples.back();
    const CommutingEigenvalue ce = commuting_eigenvalue(partner, st, ctx.tol);
    const double res = rel_residual(partner.mat() * ce.x - ce.lambda * ce.x,
                                    std::max(inf_norm(partner.mat()), ce.lambda) *
                                        std::max(vec_inf(ce.x), 1e-300));
    margin = std::min(margin, 1e-6 - res);
  }

  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "peripheral structure property violated";
    attach(o, "K", k.mat());
  }
  return o;
}

// For irreducible K the peripheral permutation is a single cycle and the
// peripheral spectrum consists of the rank-th roots of unity times r, each a
// simple eigenvalue.
TrialOutcome prop_rem(TrialContext& ctx) {
  const double density = (ctx.trial % 3 == 0) ? 0.0 : ctx.rng.uniform(0.05, 0.3);
  const PosMatrix k = random_irreducible(ctx.n, density, ctx.rng.raw());
  ctx.note("K", k.mat());
  PeripheralStructure st;
  try {
    st = peripheral_cycle_structure(k, ctx.tol);
  } catch (const BandSeparationFailure& e) {
    return skip(std::string("peripheral band not separated: ") + e.what());
  }
  const double r = st.radius;
  double margin = std::numeric_limits<double>::infinity();

  // single cycle
  {
    int length = 0;
    int cur = 0;
    do {
      cur = st.permutation[static_cast<size_t>(cur)];
      ++length;
    } while (cur != 0 && length <= st.rank);
    margin = std::min(margin, length == st.rank ? margin : -1.0);
    margin = std::min(margin, st.period == st.rank ? margin : -1.0);
  }
  // peripheral spectrum = r * rank-th roots of unity, within 1e-7 relative
  {
    const SpectrumReport rep = spectrum(k, ctx.tol);
    if (static_cast<int>(rep.peripheral.size()) != st.rank) {
      margin = -1.0;
    } else {
      for (const auto& ev : rep.peripheral) {
        double best = std::numeric_limits<double>::infinity();
        for (int q = 0; q < st.rank; ++q) {
          const double th = 2.0 * M_PI * q / st.rank;
          best = std::min(best,
                          std::abs(ev - r * std::complex<double>(std::cos(th), std::sin(th))));
        }
        margin = std::min(margin, 1e-7 * r - best);
      }
      // simplicity: each peripheral eigenvalue has a one-dimensional eigenspace
      for (const auto& ev : rep.peripheral) {
        Eigen::MatrixXcd shifted = k.mat().cast<std::complex<double>>();
        shifted.diagonal().array() -= ev;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted);
        int rank = 0;
        const double rank_tol = ctx.tol.zero * std::max(1.0, inf_norm(k.mat())) * ctx.n;
        for (int i = 0; i < svd.singularValues().size(); ++i)
          if (svd.singularValues()(i) > rank_tol) ++rank;
        margin = std::min(margin, rank == ctx.n - 1 ? margin : -1.0);
      }
    }
  }

  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "irreducible operator violated the cyclic peripheral structure";
    attach(o, "K", k.mat());
  }
  return o;
}

// Semi-commuting with an irreducible operator forces commutation.
TrialOutcome prop_pcu1(TrialContext& ctx) {
  const PosMatrix t = random_irreducible(ctx.n, ctx.rng.uniform(0.1, 0.5), ctx.rng.raw());
  ctx.note("T", t.mat());
  const Side side = (ctx.trial % 2 == 0) ? Side::Right : Side::Left;
  const SampleResult s = sample_semi_commuting(t, side, ctx.rng.raw(), 4, ctx.tol);
  const PosMatrix& a = s.samples.back();
  ctx.note("A", a.mat());
  const double bound = 1e-7 * inf_norm(t.mat()) * std::max(inf_norm(a.mat()), 1e-300);
  const double comm = inf_norm(t.mat() * a.mat() - a.mat() * t.mat());
  TrialOutcome o = pass_with(bound - comm);
  if (o.status == TrialStatus::Fail) {
    o.detail = "sampled semi-commuting partner does not commute";
    attach(o, "T", t.mat());
    attach(o, "A", a.mat());
  }
  return o;
}

// Strict domination of an irreducible operator strictly drops the radius.
TrialOutcome prop_compa(TrialContext& ctx) {
  const PosMatrix a = random_irreducible(ctx.n, ctx.rng.uniform(0.1, 0.6), ctx.rng.raw());
  ctx.note("A", a.mat());
  Matrix b = a.mat();
  bool reduced = false;
  for (int i = 0; i < ctx.n; ++i)
    for (int j = 0; j < ctx.n; ++j)
      if (b(i, j) > 0.0 && ctx.rng.u01() < 0.4) {
        b(i, j) *= ctx.rng.uniform(0.2, 0.9);
        reduced = true;
      }
  if (!reduced) {
    for (int i = 0; i < ctx.n && !reduced; ++i)
      for (int j = 0; j < ctx.n && !reduced; ++j)
        if (b(i, j) > 0.0) {
          b(i, j) *= 0.5;
          reduced = true;
        }
  }
  const ComparisonReport rep = comparison_check(a, PosMatrix(b, ctx.tol), ctx.tol);
  TrialOutcome o = pass_with(rep.margin - 1e-10 * rep.radius_a);
  if (o.status == TrialStatus::Fail) {
    o.detail = "dominated operator did not lose spectral radius";
    attach(o, "A", a.mat());
    attach(o, "B", b);
  }
  return o;
}

// Common eigenpair of a commuting pair with an irreducible member.
TrialOutcome prop_peris(TrialContext& ctx) {
  const PosMatrix t = random_irreducible(ctx.n, ctx.rng.uniform(0.1, 0.5), ctx.rng.raw());
  ctx.note("T", t.mat());
  const SampleResult s = sample_semi_commuting(t, Side::Right, ctx.rng.raw(), 4, ctx.tol);
  const PosMatrix& k = s.samples.back();
  ctx.note("K", k.mat());
  if (inf_norm(k.mat()) <= ctx.tol.zero) return skip("sampled partner vanished");
  const CommonEigenpair cpe = common_peripheral_eigenpair(t, k, ctx.tol);

  double margin = std::numeric_limits<double>::infinity();
  const double r_t = spectral_radius(t, ctx.tol);
  // r(T) is an eigenvalue of the irreducible T, so lambda must equal it.
  margin = std::min(margin, 1e-6 * std::max(1.0, r_t) - std::abs(cpe.lambda_t - r_t));
  for (int rep = 0; rep < 2; ++rep) {
    const Vec x = random_positive_vec(ctx.n, ctx.rng);
    margin = std::min(margin, local_spectral_radius(t, x, ctx.tol).exact -
                                  (cpe.lambda_t - 1e-9));
  }
  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "common eigenpair properties violated";
    attach(o, "T", t.mat());
    attach(o, "K", k.mat());
  }
  return o;
}

// Chains T <-> S <-> K: operators commuting with the strictly positive
// sandwich share its Perron eigenvector.
TrialOutcome prop_perisc3(TrialContext& ctx) {
  const PosMatrix t = random_irreducible(ctx.n, ctx.rng.uniform(0.1, 0.5), ctx.rng.raw());
  ctx.note("T", t.mat());
  const PosMatrix k = random_nonneg(ctx.n, ctx.rng.uniform(0.3, 0.8), ctx.rng, ctx.tol);
  ctx.note("K", k.mat());
  const PosMatrix expand = strongly_expanding_sum(t, ctx.tol);
  const PosMatrix ktilde(expand.mat() * k.mat() * expand.mat(), ctx.tol);
  const PerronPair pp = perron_pair(ktilde, ctx.tol);

  const SampleResult samples =
      sample_semi_commuting(ktilde, Side::Right, ctx.rng.raw(), 4, ctx.tol);
  const PosMatrix& s = samples.samples.back();
  if (inf_norm(s.mat()) <= ctx.tol.zero) return skip("sampled partner vanished");

  const double lambda_s = pp.x0star.dot(s.mat() * pp.x0);
  double margin = std::numeric_limits<double>::infinity();
  margin = std::min(margin,
                    1e-6 - rel_residual(s.mat() * pp.x0 - lambda_s * pp.x0,
                                        std::max(inf_norm(s.mat()), 1e-300) *
                                            vec_inf(pp.x0)));
  margin = std::min(margin,
                    1e-6 - rel_residual(s.mat().transpose() * pp.x0star - lambda_s * pp.x0star,
                                        std::max(inf_norm(s.mat()), 1e-300) *
                                            vec_inf(pp.x0star)));
  // S > 0 nonzero forces lambda_S > 0 and hence r(S) > 0.
  margin = std::min(margin, lambda_s - ctx.tol.zero);
  margin = std::min(margin, spectral_radius(s, ctx.tol) - lambda_s * (1.0 - 1e-6) + 1e-12);
  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "chain eigenvector property violated";
    attach(o, "T", t.mat());
    attach(o, "K", k.mat());
    attach(o, "S", s.mat());
  }
  return o;
}

// Reducibility criteria force both super-commutants to be reducible.
TrialOutcome prop_app1(TrialContext& ctx) {
  const int n = ctx.n;
  Matrix m = Matrix::Zero(n, n);
  const int variant = ctx.trial % 3;
  if (variant == 0) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (ctx.rng.u01() < 0.7) m(i, j) = ctx.rng.unit_open();
    if (max_abs(m) == 0.0) m(0, n - 1) = 1.0;
  } else if (variant == 1) {
    for (int i = 0; i < n; ++i) m(i, i) = 0.5 + i + ctx.rng.u01() * 0.2;
  } else {
    for (int i = 0; i < n; ++i) m(i, i) = 0.5 + i;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (ctx.rng.u01() < 0.5) m(i, j) = ctx.rng.unit_open();
  }
  const PosMatrix k(m, ctx.tol);
  ctx.note("K", k.mat());
  const double r = spectral_radius(k, ctx.tol);

  bool triggered = false;
  if (r <= ctx.tol.zero) triggered = true;
  if (!triggered) {
    for (int i = 0; i < n && !triggered; ++i) {
      if (local_spectral_radius(k, Vec::Unit(n, i), ctx.tol).exact < r * (1.0 - 1e-6))
        triggered = true;
      if (dual_local_spectral_radius(k, Vec::Unit(n, i), ctx.tol).exact < r * (1.0 - 1e-6))
        triggered = true;
    }
  }
  if (!triggered) return skip("no reducibility criterion fired for this instance");

  const auto right = is_super_commutant_irreducible(k, Side::Right, ctx.tol);
  const auto left = is_super_commutant_irreducible(k, Side::Left, ctx.tol);
  double margin = (!right.irreducible && !left.irreducible) ? 1.0 : -1.0;
  if (margin > 0.0) {
    if (!is_invariant_ideal(k, *right.witness, ctx.tol) ||
        !is_invariant_ideal(k, *left.witness, ctx.tol))
      margin = -1.0;
  }
  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "super-commutant stayed irreducible under a reducibility criterion";
    attach(o, "K", k.mat());
  }
  return o;
}

// Reducibility detectors: triggered criteria certify, irreducible inputs
// trigger nothing.
TrialOutcome prop_sver(TrialContext& ctx) {
  const int n = ctx.n;
  PosMatrix t = [&]() {
    if (ctx.trial % 2 == 0)
      return random_irreducible(n, ctx.rng.uniform(0.1, 0.5), ctx.rng.raw());
    Matrix m = random_nonneg(n, 0.6, ctx.rng, ctx.tol).mat();
    const int cut = 1 + ctx.rng.below(n - 1);
    for (int i = cut; i < n; ++i)
      for (int j = 0; j < cut; ++j) m(i, j) = 0.0;  // block upper triangular
    return PosMatrix(m, ctx.tol);
  }();
  ctx.note("T", t.mat());
  const Side side = (ctx.trial % 4 < 2) ? Side::Right : Side::Left;
  const SampleResult s = sample_semi_commuting(t, side, ctx.rng.raw(), 4, ctx.tol);
  const PosMatrix& k = s.samples.back();
  ctx.note("K", k.mat());
  if (inf_norm(k.mat()) <= ctx.tol.zero) return skip("sampled partner vanished");

  // The sampled A satisfies A T >= T A (right) i.e. T K - K T <= 0 for K = A.
  const Side pair_side = side == Side::Right ? Side::Left : Side::Right;
  const bool irreducible = is_ideal_irreducible(t, ctx.tol).irreducible;
  std::vector<TriggeredCriterion> fired;
  try {
    fired = reducibility_detectors(t, k, pair_side, ctx.tol);
  } catch (const InternalError& e) {
    TrialOutcome o = pass_with(-1.0);
    o.detail = std::string("detector internal failure: ") + e.what();
    attach(o, "T", t.mat());
    attach(o, "K", k.mat());
    return o;
  }
  double margin = 1.0;
  if (irreducible && !fired.empty()) margin = -1.0;
  for (const auto& c : fired) {
    if (c.witness.is_trivial() || !is_invariant_ideal(t, c.witness, ctx.tol))
      margin = -1.0;
  }
  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "reducibility detector misfired";
    attach(o, "T", t.mat());
    attach(o, "K", k.mat());
  }
  return o;
}

// Commutators of semi-commuting pairs certify as nilpotent.
TrialOutcome prop_quasi(TrialContext& ctx) {
  const PosMatrix k = random_nonneg(ctx.n, ctx.rng.uniform(0.2, 0.8), ctx.rng, ctx.tol);
  ctx.note("K", k.mat());
  const Side side = (ctx.trial % 2 == 0) ? Side::Right : Side::Left;
  const SampleResult s = sample_semi_commuting(k, side, ctx.rng.raw(), 4, ctx.tol);
  const PosMatrix& t = s.samples.back();
  ctx.note("T", t.mat());
  if (inf_norm(t.mat()) <= ctx.tol.zero) return skip("sampled partner vanished");

  const NilpotencyCertificate cert = commutator_nilpotency(t, k, ctx.tol);
  double margin = 1e-6 * std::max(1.0, inf_norm(cert.commutator)) - cert.radius;
  if (cert.index > ctx.n) margin = -1.0;
  if (!cert.chain.maximal) margin = -1.0;
  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "nilpotency certificate failed";
    attach(o, "T", t.mat());
    attach(o, "K", k.mat());
  }
  return o;
}

// Agreement of the digraph irreducibility test with exhaustive enumeration.
TrialOutcome prop_oracle(TrialContext& ctx) {
  const int n = std::min(ctx.n, 6);
  const PosMatrix a = random_nonneg(n, ctx.rng.uniform(0.1, 0.9), ctx.rng, ctx.tol);
  ctx.note("A", a.mat());
  const IrreducibilityCertificate cert = is_ideal_irreducible(a, ctx.tol);

  bool brute_reducible = false;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    CoordinateIdeal s(n);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) s.add(i);
    // Entrywise test cross-checked against the action on basis vectors.
    const bool entrywise = is_invariant_ideal(a, s, ctx.tol);
    bool by_action = true;
    for (int j = 0; j < n && by_action; ++j) {
      if (!s.contains(j)) continue;
      const CoordinateIdeal img = support_of(Vec(a.mat().col(j)), ctx.tol);
      if (!img.is_subset_of(s)) by_action = false;
    }
    if (entrywise != by_action) {
      TrialOutcome o = pass_with(-1.0);
      o.detail = "entrywise invariance disagrees with the action oracle";
      attach(o, "A", a.mat());
      return o;
    }
    if (entrywise) brute_reducible = true;
  }
  double margin = (cert.irreducible == !brute_reducible) ? 1.0 : -1.0;
  if (!cert.irreducible &&
      (cert.witness->is_trivial() || !is_invariant_ideal(a, *cert.witness, ctx.tol)))
    margin = -1.0;
  TrialOutcome o = pass_with(margin);
  if (o.status == TrialStatus::Fail) {
    o.detail = "irreducibility test disagrees with exhaustive enumeration";
    attach(o, "A", a.mat());
  }
  return o;
}

struct PropertyDef {
  const char* name;
  TrialOutcome (*run)(TrialContext&);
};

const PropertyDef kProperties[] = {
    {"turo", prop_turo},       {"scc", prop_scc},
    {"locaq", prop_locaq},     {"hyper", prop_hyper},
    {"rem", prop_rem},         {"pcu1", prop_pcu1},
    {"compa", prop_compa},     {"peris", prop_peris},
    {"perisc3", prop_perisc3}, {"app1", prop_app1},
    {"sver", prop_sver},       {"quasi", prop_quasi},
    {"oracle", prop_oracle},
};

}  // namespace

std::vector<std::string> suite_property_names() {
  std::vector<std::string> names;
  for (const auto& p : kProperties) names.emplace_back(p.name);
  return names;
}

void SuiteConfig::validate() const {
  tol.validate();
  if (trials < 1) throw InvalidArgument("suite: trials must be >= 1");
  if (n_values.empty()) throw InvalidArgument("suite: no dimensions given");
  for (int n : n_values)
    if (n < 2 || n > 64)
      throw InvalidArgument("suite: dimensions must lie in [2, 64]");
  const auto known = suite_property_names();
  for (const auto& p : properties)
    if (std::find(known.begin(), known.end(), p) == known.end())
      throw InvalidArgument("suite: unknown property '" + p + "'");
}

PosMatrix random_irreducible(int n, double density, uint64_t seed) {
  if (n < 2) throw InvalidArgument("random_irreducible: n must be >= 2");
  if (!(density >= 0.0 && density <= 1.0))
    throw InvalidArgument("random_irreducible: density must lie in [0, 1]");
  Rng rng(seed);
  Matrix m = Matrix::Zero(n, n);
  const std::vector<int> cycle = rng.shuffled(n);
  for (int t = 0; t < n; ++t) {
    const int j = cycle[static_cast<size_t>(t)];
    const int i = cycle[static_cast<size_t>((t + 1) % n)];
    m(i, j) = rng.unit_open();
  }
  if (density > 0.0)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.u01() < density && m(i, j) == 0.0) m(i, j) = rng.unit_open();
  return PosMatrix(m);
}

PosMatrix random_peripheral_structured(int n, uint64_t seed) {
  if (n < 2) throw InvalidArgument("random_peripheral_structured: n must be >= 2");
  Rng rng(seed);
  const int max_blocks = std::max(1, n / 2);
  const int r = 1 + rng.below(std::min(max_blocks, 4));
  std::vector<int> sizes(static_cast<size_t>(r), n / r);
  for (int i = 0; i < n % r; ++i) ++sizes[static_cast<size_t>(i)];

  const std::vector<int> coords = rng.shuffled(n);
  std::vector<std::vector<int>> blocks;
  int at = 0;
  for (int i = 0; i < r; ++i) {
    std::vector<int> b(coords.begin() + at, coords.begin() + at + sizes[static_cast<size_t>(i)]);
    std::sort(b.begin(), b.end());
    blocks.push_back(std::move(b));
    at += sizes[static_cast<size_t>(i)];
  }

  std::vector<Vec> xs, ys;
  for (int i = 0; i < r; ++i) {
    Vec x = Vec::Zero(n), y = Vec::Zero(n);
    for (int v : blocks[static_cast<size_t>(i)]) {
      x(v) = rng.uniform(0.2, 1.2);
      y(v) = rng.uniform(0.2, 1.2);
    }
    y /= y.dot(x);  // biorthogonal normalization within the block
    xs.push_back(x);
    ys.push_back(y);
  }
  const std::vector<int> pi = rng.shuffled(r);

  Matrix k = Matrix::Zero(n, n);
  for (int i = 0; i < r; ++i)
    k += xs[static_cast<size_t>(pi[static_cast<size_t>(i)])] * ys[static_cast<size_t>(i)].transpose();

  // Strictly subdominant in-block perturbation that annihilates the frame:
  // u in the image block with y_pi(i)(u) = 0, v in the source block with
  // v . x_i = 0, scaled to keep the block entrywise positive.
  for (int i = 0; i < r; ++i) {
    const int img = pi[static_cast<size_t>(i)];
    if (blocks[static_cast<size_t>(i)].size() < 2 || blocks[static_cast<size_t>(img)].size() < 2)
      continue;
    Vec a = Vec::Zero(n), b = Vec::Zero(n);
    for (int v : blocks[static_cast<size_t>(img)]) a(v) = rng.uniform(-1.0, 1.0);
    for (int v : blocks[static_cast<size_t>(i)]) b(v) = rng.uniform(-1.0, 1.0);
    const Vec u = a - ys[static_cast<size_t>(img)].dot(a) /
                          ys[static_cast<size_t>(img)].dot(xs[static_cast<size_t>(img)]) *
                          xs[static_cast<size_t>(img)];
    const Vec v = b - b.dot(xs[static_cast<size_t>(i)]) /
                          xs[static_cast<size_t>(i)].dot(xs[static_cast<size_t>(i)]) *
                          xs[static_cast<size_t>(i)];
    const Matrix d = u * v.transpose();
    const double d_max = max_abs(d);
    if (d_max <= 1e-12) continue;
    double min_block = std::numeric_limits<double>::infinity();
    for (int p : blocks[static_cast<size_t>(img)])
      for (int q : blocks[static_cast<size_t>(i)])
        min_block = std::min(min_block,
                             xs[static_cast<size_t>(img)](p) * ys[static_cast<size_t>(i)](q));
    k += (0.3 * min_block / d_max) * d;
  }

  k *= rng.uniform(0.5, 2.0);
  return PosMatrix(k);
}

std::vector<TriggeredCriterion> reducibility_detectors(const PosMatrix& t,
                                                       const PosMatrix& k,
                                                       Side side,
                                                       const Tolerances& tol) {
  tol.validate();
  const int n = t.n();
  if (k.n() != n)
    throw InvalidArgument("reducibility_detectors: dimension mismatch");
  const double t_norm = inf_norm(t.mat());
  const double k_norm = inf_norm(k.mat());
  if (!(t_norm > tol.zero) || !(k_norm > tol.zero))
    throw PreconditionViolation("reducibility_detectors: operators must be nonzero");
  const Matrix comm = t.mat() * k.mat() - k.mat() * t.mat();
  const double slack = tol.zero * std::max(1.0, t_norm * k_norm);
  const bool sign_ok = side == Side::Right ? comm.minCoeff() >= -slack
                                           : comm.maxCoeff() <= slack;
  if (!sign_ok)
    throw PreconditionViolation("reducibility_detectors: pair is not semi-commuting");

  std::vector<TriggeredCriterion> out;
  auto certify = [&](const std::string& id, const std::string& desc, double margin) {
    const IrreducibilityCertificate cert = is_ideal_irreducible(t, tol);
    if (cert.irreducible)
      throw InternalError("reducibility criterion '" + id +
                          "' fired for an irreducible operator");
    out.push_back({id, desc, margin, *cert.witness});
  };

  const double r_k = spectral_radius(k, tol);
  if (r_k <= tol.zero) {
    certify("radius-zero", "r(K) vanishes", tol.zero - r_k);
  } else {
    double deficit = 0.0, dual_deficit = 0.0;
    for (int i = 0; i < n; ++i) {
      deficit = std::max(deficit, r_k * (1.0 - 1e-6) -
                                      local_spectral_radius(k, Vec::Unit(n, i), tol).exact);
      dual_deficit = std::max(dual_deficit,
                              r_k * (1.0 - 1e-6) -
                                  dual_local_spectral_radius(k, Vec::Unit(n, i), tol).exact);
    }
    if (deficit > 0.0)
      certify("local-radius-deficiency",
              "some positive vector has local spectral radius below r(K)", deficit);
    if (dual_deficit > 0.0)
      certify("dual-local-radius-deficiency",
              "some positive functional has local spectral radius below r(K)",
              dual_deficit);
  }

  const Matrix product = t.mat() * k.mat();
  const double r_tk = spectral_radius(product, tol);
  if (r_tk <= tol.zero) {
    certify("product-radius-zero", "r(TK) vanishes", tol.zero - r_tk);
  } else if (r_k > tol.zero) {
    const double ratio = r_tk / r_k;
    double deficit = 0.0, dual_deficit = 0.0;
    for (int i = 0; i < n; ++i) {
      deficit = std::max(deficit, ratio * (1.0 - 1e-6) -
                                      local_spectral_radius(t, Vec::Unit(n, i), tol).exact);
      dual_deficit = std::max(dual_deficit,
                              ratio * (1.0 - 1e-6) -
                                  dual_local_spectral_radius(t, Vec::Unit(n, i), tol).exact);
    }
    if (deficit > 0.0)
      certify("product-local-radius-deficiency",
              "some positive vector has local spectral radius of T below r(TK)/r(K)",
              deficit);
    if (dual_deficit > 0.0)
      certify("product-dual-local-radius-deficiency",
              "some positive functional has local spectral radius of T below "
              "r(TK)/r(K)",
              dual_deficit);
  }

  const GapResult gaps = commutant_equality_gap(t, tol);
  const double gap = std::max(gaps.gap_right, gaps.gap_left);
  if (gap > 1e-7 * std::max(1.0, t_norm))
    certify("strict-semi-commuting-partner",
            "an operator strictly semi-commutes with T", gap);
  return out;
}

ComparisonReport comparison_check(const PosMatrix& a, const PosMatrix& b,
                                  const Tolerances& tol) {
  tol.validate();
  if (a.n() != b.n())
    throw InvalidArgument("comparison_check: dimension mismatch");
  if (!is_ideal_irreducible(a, tol).irreducible)
    throw PreconditionViolation("comparison_check: A must be irreducible");
  if (((a.mat() - b.mat()).minCoeff()) < -tol.zero)
    throw PreconditionViolation("comparison_check: B must satisfy 0 <= B <= A");

  ComparisonReport rep;
  rep.radius_a = spectral_radius(a, tol);
  rep.radius_b = spectral_radius(b, tol);
  rep.margin = rep.radius_a - rep.radius_b;
  rep.equal_inputs = inf_norm(a.mat() - b.mat()) <= tol.zero;
  return rep;
}

SuiteReport run_theorem_suite(const SuiteConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  SuiteReport report;
  report.seed = config.seed;
  report.n_values = config.n_values;
  report.trials = config.trials;
  report.tol = config.tol;

  for (const auto& def : kProperties) {
    if (!config.properties.empty() &&
        std::find(config.properties.begin(), config.properties.end(), def.name) ==
            config.properties.end())
      continue;
    PropertyResult pr;
    pr.name = def.name;
    for (int trial = 0; trial < config.trials; ++trial) {
      const int n = config.n_values[static_cast<size_t>(trial) % config.n_values.size()];
      const uint64_t trial_seed = mix_seed(config.seed, def.name, static_cast<uint64_t>(trial));
      TrialContext ctx{n, trial, trial_seed, config.tol, Rng(trial_seed), {}};
      TrialOutcome outcome;
      try {
        outcome = def.run(ctx);
      } catch (const BandSeparationFailure& e) {
        outcome = skip(std::string("band separation: ") + e.what());
      } catch (const ConditioningFailure& e) {
        outcome = skip(std::string("conditioning: ") + e.what());
      } catch (const Error& e) {
        outcome.status = TrialStatus::Fail;
        outcome.margin = -1.0;
        outcome.detail = e.what();
      }
      if (outcome.status == TrialStatus::Fail && outcome.payload.empty())
        outcome.payload = ctx.instance;
      switch (outcome.status) {
        case TrialStatus::Pass:
          ++pr.pass;
          break;
        case TrialStatus::Fail:
          ++pr.fail;
          if (!pr.counterexample) {
            Counterexample ce;
            ce.trial = trial;
            ce.trial_seed = trial_seed;
            ce.detail = outcome.detail;
            ce.matrices = outcome.payload;
            pr.counterexample = std::move(ce);
          }
          break;
        case TrialStatus::Skip:
          ++pr.skipped;
          pr.skip_reason = outcome.detail;
          break;
      }
      if (outcome.status != TrialStatus::Skip) {
        if (!pr.worst_margin || outcome.margin < *pr.worst_margin)
          pr.worst_margin = outcome.margin;
      }
    }
    report.total_pass += pr.pass;
    report.total_fail += pr.fail;
    report.total_skipped += pr.skipped;
    report.properties.push_back(std::move(pr));
  }

  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

}  // namespace pflattice
