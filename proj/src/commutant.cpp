#include "pflattice/commutant.hpp"

#include "pflattice/lattice.hpp"
#include "pflattice/simplex.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace pflattice {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr long kIterationCap = 10000;
constexpr double kPivotEps = 1e-9;

inline int var_index(int p, int q, int n) { return p * n + q; }

// Coefficients of (A K - K A)_(p,q) as a linear form in the entries of A:
//   d/dA_(p,t) = K(t,q),  d/dA_(t,q) = -K(p,t).
template <typename Scalar>
std::vector<Scalar> commutator_row(const Matrix& k, int p, int q) {
  const int n = static_cast<int>(k.rows());
  std::vector<Scalar> row(static_cast<size_t>(n * n), Scalar(0));
  for (int t = 0; t < n; ++t) {
    row[static_cast<size_t>(var_index(p, t, n))] += Scalar(k(t, q));
    row[static_cast<size_t>(var_index(t, q, n))] -= Scalar(k(p, t));
  }
  return row;
}

// One description for the three LP kinds used here. The semi-commutation
// rows are scale-invariant in K, so the double path solves against K/||K||
// for conditioning while the exact fallback uses the raw (dyadic) entries.
struct ConeLp {
  Side side = Side::Right;
  std::optional<std::pair<int, int>> pin;    // pinned entry = 1
  bool unit_mass = false;                    // add sum(A) = 1
  const std::vector<double>* objective = nullptr;  // minimize c . A
  bool maximize_commutator_mass = false;     // gap objective
};

// Optional graded relaxation of the side rows ("within lp_eps" is part of
// the feasibility contract): it removes the extreme degeneracy of cones
// whose members satisfy every row with equality, which the floating-point
// simplex cannot otherwise traverse reliably. The relaxations are distinct
// per row and sum to at most lp_eps.
template <typename Scalar>
LinearProgram<Scalar> build_cone_lp(const ConeLp& spec, const Matrix& k,
                                    double relax_total = 0.0, int profile = 0) {
  const int n = static_cast<int>(k.rows());
  const int rows = n * n;
  LinearProgram<Scalar> lp;
  lp.num_vars = n * n;
  lp.objective.assign(static_cast<size_t>(n * n), Scalar(0));
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const int r = p * n + q;
      const int graded = profile == 0 ? r + 1 : rows - r;
      const double delta =
          relax_total * 2.0 * graded / (static_cast<double>(rows) * (rows + 1));
      lp.add_row(commutator_row<Scalar>(k, p, q),
                 spec.side == Side::Right ? ConstraintOp::Ge : ConstraintOp::Le,
                 spec.side == Side::Right ? Scalar(-delta) : Scalar(delta));
    }
  if (spec.pin) {
    std::vector<Scalar> row(static_cast<size_t>(n * n), Scalar(0));
    row[static_cast<size_t>(var_index(spec.pin->first, spec.pin->second, n))] = Scalar(1);
    lp.add_row(std::move(row), ConstraintOp::Eq, Scalar(1));
  }
  if (spec.unit_mass)
    lp.add_row(std::vector<Scalar>(static_cast<size_t>(n * n), Scalar(1)),
               ConstraintOp::Eq, Scalar(1));
  if (spec.objective)
    for (int v = 0; v < n * n; ++v)
      lp.objective[static_cast<size_t>(v)] = Scalar((*spec.objective)[static_cast<size_t>(v)]);
  if (spec.maximize_commutator_mass) {
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        const auto row = commutator_row<Scalar>(k, p, q);
        for (int v = 0; v < n * n; ++v)
          lp.objective[static_cast<size_t>(v)] +=
              (spec.side == Side::Right ? -row[static_cast<size_t>(v)]
                                        : row[static_cast<size_t>(v)]);
      }
  }
  return lp;
}

struct ConeOutcome {
  LpStatus status = LpStatus::Infeasible;
  Matrix a;                // clamped nonnegative solution
  double commutator_mass = 0.0;  // gap objective in raw-K units
  bool exact_path = false;
};

double row_value(const std::vector<double>& coeffs, const std::vector<double>& x) {
  double v = 0.0;
  for (size_t q = 0; q < coeffs.size(); ++q) v += coeffs[q] * x[q];
  return v;
}

bool solution_valid(const LinearProgram<double>& lp, const LpResult<double>& res,
                    double lp_eps) {
  if (res.status != LpStatus::Optimal) return false;
  double scale = 1.0;
  for (double v : res.x) scale = std::max(scale, std::abs(v));
  const double slack = 10.0 * std::max(lp_eps, 1e-9) * scale;
  for (double v : res.x)
    if (v < -slack) return false;
  for (size_t r = 0; r < lp.rows.size(); ++r) {
    const double v = row_value(lp.rows[r], res.x);
    switch (lp.ops[r]) {
      case ConstraintOp::Ge:
        if (v < lp.rhs[r] - slack) return false;
        break;
      case ConstraintOp::Le:
        if (v > lp.rhs[r] + slack) return false;
        break;
      case ConstraintOp::Eq:
        if (std::abs(v - lp.rhs[r]) > slack) return false;
        break;
    }
  }
  return true;
}

// Double simplex on the lp_eps-relaxed polytope (non-degenerate, so the
// floating point iteration traverses it reliably); the final vertex is
// re-solved for the true right-hand sides and validated against the true
// constraints. A failed validation retries with the mirrored relaxation
// grading, and small instances fall back to the exact rational solver.
// Infeasibility verdicts are accepted from the double path; the semigroup
// assertions on the relation cross-check them.
ConeOutcome solve_cone_lp(const ConeLp& spec, const Matrix& k_raw, double lp_eps) {
  const int n = static_cast<int>(k_raw.rows());
  const double k_norm = inf_norm(k_raw);
  const Matrix khat = k_norm > 0.0 ? Matrix(k_raw / k_norm) : k_raw;
  const LinearProgram<double> lp_true = build_cone_lp<double>(spec, khat, 0.0);

  ConeOutcome out;
  for (int profile = 0; profile < 2; ++profile) {
    LinearProgram<double> lp = build_cone_lp<double>(spec, khat, lp_eps, profile);
    lp.refine_rhs = lp_true.rhs;
    const SimplexSolver<double> solver(kPivotEps, kIterationCap);
    const LpResult<double> res = solver.solve(lp);
    if (res.status == LpStatus::Optimal && solution_valid(lp_true, res, lp_eps)) {
      out.status = LpStatus::Optimal;
      out.a = Matrix(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
          out.a(p, q) = std::max(0.0, res.x[static_cast<size_t>(var_index(p, q, n))]);
      if (spec.maximize_commutator_mass)
        out.commutator_mass = std::max(0.0, -res.objective) * k_norm;
      return out;
    }
    if (res.status == LpStatus::Unbounded || res.status == LpStatus::Infeasible) {
      out.status = res.status;
      return out;
    }
  }

  // Exact rational arithmetic stays affordable at fixture scale only.
  if (n > 6)
    throw SolverFailure(
        "floating-point simplex failed validation and the instance is too "
        "large for the exact fallback");

  const LinearProgram<Rational> lpq = build_cone_lp<Rational>(spec, k_raw);
  const SimplexSolver<Rational> exact(Rational(0), kIterationCap);
  const LpResult<Rational> resq = exact.solve(lpq);
  if (resq.status == LpStatus::IterationLimit)
    throw SolverFailure("simplex iteration cap exceeded");
  out.exact_path = true;
  out.status = resq.status;
  if (resq.status == LpStatus::Optimal) {
    out.a = Matrix(n, n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        double v = static_cast<double>(resq.x[static_cast<size_t>(var_index(p, q, n))]);
        out.a(p, q) = std::max(0.0, v);
      }
    if (spec.maximize_commutator_mass) {
      Rational mass = -resq.objective;
      if (mass < 0) mass = 0;
      out.commutator_mass = static_cast<double>(mass);
    }
  }
  return out;
}

// Worst violation of the side inequality for A against K-hat (scale-free).
double side_violation(const Matrix& a, const Matrix& khat, Side side) {
  const Matrix c = a * khat - khat * a;
  return side == Side::Right ? std::max(0.0, -c.minCoeff())
                             : std::max(0.0, c.maxCoeff());
}

void verify_member(const Matrix& a, const Matrix& khat, Side side, double lp_eps,
                   const char* context) {
  const double slack = lp_eps * std::max(1.0, max_abs(a)) * 10.0;
  if (side_violation(a, khat, side) > slack)
    throw InternalError(std::string(context) +
                        ": produced matrix violates the side inequality");
}

}  // namespace

FeasibilityResult semi_commutant_feasible(const PosMatrix& k, Side side, int i,
                                          int j, const Tolerances& tol) {
  tol.validate();
  const int n = k.n();
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw InvalidArgument("semi_commutant_feasible: index out of range");

  ConeLp spec;
  spec.side = side;
  spec.pin = std::make_pair(i, j);
  const ConeOutcome res = solve_cone_lp(spec, k.mat(), tol.lp_eps);

  FeasibilityResult out;
  if (res.status == LpStatus::Infeasible) return out;
  if (res.status != LpStatus::Optimal)
    throw SolverFailure("semi_commutant_feasible: unexpected LP status");
  const double k_norm = inf_norm(k.mat());
  const Matrix khat = k_norm > 0.0 ? Matrix(k.mat() / k_norm) : k.mat();
  verify_member(res.a, khat, side, tol.lp_eps, "semi_commutant_feasible");
  if (std::abs(res.a(i, j) - 1.0) > 1e-7)
    throw InternalError("semi_commutant_feasible: pinned entry drifted");
  out.feasible = true;
  out.witness = PosMatrix(res.a, tol);
  return out;
}

CommutantRelation super_commutant_relation(const PosMatrix& k, Side side,
                                           const Tolerances& tol,
                                           bool keep_witnesses) {
  tol.validate();
  const int n = k.n();
  CommutantRelation rel;
  rel.side = side;
  rel.n = n;
  rel.edges.assign(static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n), false));
  if (keep_witnesses)
    rel.witnesses.assign(static_cast<size_t>(n),
                         std::vector<std::optional<PosMatrix>>(static_cast<size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      FeasibilityResult f;
      try {
        f = semi_commutant_feasible(k, side, i, j, tol);
      } catch (const SolverFailure& e) {
        throw SolverFailure(std::string(e.what()) + " at entry (" +
                            std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
      }
      rel.edges[static_cast<size_t>(i)][static_cast<size_t>(j)] = f.feasible;
      if (keep_witnesses && f.feasible)
        rel.witnesses[static_cast<size_t>(i)][static_cast<size_t>(j)] = f.witness;
    }

  // Reflexivity and transitive closure are theorems (the sides are
  // multiplicative semigroups containing the identity); repair is forbidden.
  for (int i = 0; i < n; ++i)
    if (!rel.edge(i, i))
      throw InternalError("super-commutant relation is not reflexive");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < n; ++t)
        if (rel.edge(i, t) && rel.edge(t, j) && !rel.edge(i, j))
          throw InternalError("super-commutant relation is not transitive");
  return rel;
}

IrreducibilityCertificate is_super_commutant_irreducible(const PosMatrix& k,
                                                         Side side,
                                                         const Tolerances& tol) {
  tol.validate();
  const int n = k.n();
  const CommutantRelation rel = super_commutant_relation(k, side, tol);
  Matrix support = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (rel.edge(i, j)) support(i, j) = 1.0;
  // Reuse the support-digraph machinery on the relation matrix; members of
  // the side can only populate entries inside the relation, so a closed set
  // of the relation digraph is invariant under the whole side.
  const IrreducibilityCertificate cert =
      is_ideal_irreducible(PosMatrix(support, tol), tol);
  if (cert.irreducible) return cert;

  // Verify the witness against structural and sampled members.
  const CoordinateIdeal& s = *cert.witness;
  const SampleResult samples = sample_semi_commuting(k, side, 0xC0FFEEu, 6, tol);
  for (const PosMatrix& a : samples.samples)
    if (!is_invariant_ideal(a, s, tol))
      throw InternalError(
          "is_super_commutant_irreducible: witness not invariant for a sampled member");
  return cert;
}

GapResult commutant_equality_gap(const PosMatrix& k, const Tolerances& tol) {
  tol.validate();
  const double k_norm = inf_norm(k.mat());
  const Matrix khat = k_norm > 0.0 ? Matrix(k.mat() / k_norm) : k.mat();

  GapResult out;
  for (Side side : {Side::Right, Side::Left}) {
    ConeLp spec;
    spec.side = side;
    spec.unit_mass = true;
    spec.maximize_commutator_mass = true;
    const ConeOutcome res = solve_cone_lp(spec, k.mat(), tol.lp_eps);
    if (res.status != LpStatus::Optimal)
      throw SolverFailure("commutant_equality_gap: LP did not reach an optimum");
    verify_member(res.a, khat, side, tol.lp_eps, "commutant_equality_gap");
    if (side == Side::Right) {
      out.gap_right = res.commutator_mass;
      out.witness_right = PosMatrix(res.a, tol);
    } else {
      out.gap_left = res.commutator_mass;
      out.witness_left = PosMatrix(res.a, tol);
    }
  }
  return out;
}

std::pair<std::string, std::string> commutant_equality_gap_exact(
    const PosMatrix& k) {
  const int n = k.n();
  if (n > 6)
    throw InvalidArgument("commutant_equality_gap_exact: n must be at most 6");

  std::pair<std::string, std::string> out;
  for (Side side : {Side::Right, Side::Left}) {
    ConeLp spec;
    spec.side = side;
    spec.unit_mass = true;
    spec.maximize_commutator_mass = true;
    const LinearProgram<Rational> lp = build_cone_lp<Rational>(spec, k.mat());
    const SimplexSolver<Rational> solver(Rational(0), kIterationCap);
    const LpResult<Rational> res = solver.solve(lp);
    if (res.status == LpStatus::IterationLimit)
      throw SolverFailure("exact simplex iteration cap exceeded");
    if (res.status != LpStatus::Optimal)
      throw SolverFailure("commutant_equality_gap_exact: LP did not reach an optimum");
    Rational gap = -res.objective;
    if (gap < 0) gap = 0;
    const std::string text = gap.str();
    if (side == Side::Right)
      out.first = text;
    else
      out.second = text;
  }
  return out;
}

SampleResult sample_semi_commuting(const PosMatrix& k, Side side, uint64_t seed,
                                   int count, const Tolerances& tol) {
  tol.validate();
  if (count < 1) throw InvalidArgument("sample_semi_commuting: count must be >= 1");
  const int n = k.n();
  const double k_norm = inf_norm(k.mat());
  const Matrix khat = k_norm > 0.0 ? Matrix(k.mat() / k_norm) : k.mat();

  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  SampleResult out;
  out.samples.push_back(PosMatrix::identity(n));
  if (count >= 2) out.samples.push_back(k);

  std::vector<Matrix> vertices;
  bool saw_nonstructural = false;
  const Matrix id_dir = Matrix::Identity(n, n) / static_cast<double>(n);
  const double k_sum = k.mat().sum();
  const Matrix k_dir = k_sum > 0.0 ? Matrix(k.mat() / k_sum) : Matrix::Zero(n, n);

  while (static_cast<int>(out.samples.size()) < count) {
    Matrix a;
    const bool combine = !vertices.empty() && (rng() & 1ULL);
    if (combine) {
      // Random convex combination of previously found vertices.
      const int picks = 2 + static_cast<int>(rng() % 2);
      Vec w(picks);
      for (int t = 0; t < picks; ++t) w(t) = uniform01() + 1e-3;
      w /= w.sum();
      a = Matrix::Zero(n, n);
      for (int t = 0; t < picks; ++t)
        a += w(t) * vertices[static_cast<size_t>(rng() % vertices.size())];
    } else {
      // A pathological random objective may defeat the floating point
      // simplex on a large instance; sampling is free to discard it and
      // draw the next one (deterministically) in that case.
      bool found = false;
      for (int attempt = 0; attempt < 20 && !found; ++attempt) {
        std::vector<double> objective(static_cast<size_t>(n * n), 0.0);
        for (int v = 0; v < n * n; ++v)
          objective[static_cast<size_t>(v)] = -uniform01();  // maximize random mass
        ConeLp spec;
        spec.side = side;
        spec.unit_mass = true;
        spec.objective = &objective;
        try {
          const ConeOutcome res = solve_cone_lp(spec, k.mat(), tol.lp_eps);
          if (res.status != LpStatus::Optimal)
            throw SolverFailure("sample_semi_commuting: vertex LP failed");
          a = res.a;
          found = true;
        } catch (const SolverFailure&) {
          if (attempt == 19) throw;
        }
      }
      vertices.push_back(a);
      if ((a - id_dir).cwiseAbs().maxCoeff() > 1e-6 &&
          (a - k_dir).cwiseAbs().maxCoeff() > 1e-6)
        saw_nonstructural = true;
    }
    verify_member(a, khat, side, tol.lp_eps, "sample_semi_commuting");
    const double scale = 0.5 + 2.0 * uniform01();
    out.samples.push_back(PosMatrix(a * scale * static_cast<double>(n), tol));
  }

  if (!vertices.empty() && !saw_nonstructural) {
    out.degenerate = true;
    out.samples.clear();
    out.samples.push_back(PosMatrix::identity(n));
    out.samples.push_back(k);
  }
  return out;
}

}  // namespace pflattice
