#pragma once

#include "pflattice/types.hpp"

#include <vector>

namespace pflattice {

enum class ConstraintOp { Eq, Le, Ge };

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

template <typename Scalar>
struct LinearProgram {
  int num_vars = 0;                          // variables are nonnegative
  std::vector<std::vector<Scalar>> rows;     // constraint coefficients
  std::vector<ConstraintOp> ops;
  std::vector<Scalar> rhs;
  std::vector<Scalar> objective;             // minimize objective . x
  /// Optional alternative rhs used only for the final basis re-solve: the
  /// iterations run on `rhs` (e.g. a relaxed polytope) while the returned
  /// vertex is computed for this rhs (the true polytope).
  std::vector<Scalar> refine_rhs;

  void add_row(std::vector<Scalar> coeffs, ConstraintOp op, Scalar b) {
    rows.push_back(std::move(coeffs));
    ops.push_back(op);
    rhs.push_back(std::move(b));
  }
};

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Scalar> x;  // primal solution (original variables)
  Scalar objective{};
  long iterations = 0;
  /// Unbounded only: an improving ray in the original variables.
  std::vector<Scalar> ray;
};

// Dense two-phase primal simplex. The entering rule is Bland's (lowest index
// with a negative reduced cost); the leaving rule prefers large pivots among
// numerically tied ratios and falls back to the strict Bland rule when a
// solve runs long, so every solve is finite and deterministic. Inequalities
// are oriented so that zero-rhs rows start with a basic slack, which keeps
// the artificial count (and the degenerate phase-1 plateau) minimal, and the
// final vertex is re-solved against the pristine constraint data to shed
// accumulated pivot roundoff. Problems here are tiny (at most a few thousand
// variables), so a full tableau is the simplest correct choice.
template <typename Scalar>
class SimplexSolver {
 public:
  explicit SimplexSolver(Scalar pivot_eps, long iteration_cap = 10000)
      : eps_(pivot_eps), cap_(iteration_cap) {}

  LpResult<Scalar> solve(const LinearProgram<Scalar>& lp) const {
    const int n = lp.num_vars;
    const int m = static_cast<int>(lp.rows.size());

    // Standard form. Inequalities become Le, then rows with negative rhs are
    // negated; a row whose slack cannot start basic receives an artificial.
    std::vector<std::vector<Scalar>> a(static_cast<size_t>(m));
    std::vector<Scalar> b(static_cast<size_t>(m), Scalar(0));
    std::vector<int> slack_col(static_cast<size_t>(m), -1);
    std::vector<Scalar> slack_sign(static_cast<size_t>(m), Scalar(0));
    std::vector<Scalar> row_sign(static_cast<size_t>(m), Scalar(1));
    int cols = n;
    for (int i = 0; i < m; ++i) {
      a[static_cast<size_t>(i)] = lp.rows[static_cast<size_t>(i)];
      b[static_cast<size_t>(i)] = lp.rhs[static_cast<size_t>(i)];
      Scalar sign(1);
      ConstraintOp op = lp.ops[static_cast<size_t>(i)];
      if (op == ConstraintOp::Ge) {
        sign = Scalar(-1);
        op = ConstraintOp::Le;
      }
      if (op == ConstraintOp::Le) {
        slack_col[static_cast<size_t>(i)] = cols++;
        slack_sign[static_cast<size_t>(i)] = sign;  // after orientation below
      }
      if (sign < Scalar(0)) {
        for (auto& v : a[static_cast<size_t>(i)]) v = -v;
        b[static_cast<size_t>(i)] = -b[static_cast<size_t>(i)];
        row_sign[static_cast<size_t>(i)] = -row_sign[static_cast<size_t>(i)];
      }
      if (b[static_cast<size_t>(i)] < Scalar(0)) {
        for (auto& v : a[static_cast<size_t>(i)]) v = -v;
        b[static_cast<size_t>(i)] = -b[static_cast<size_t>(i)];
        row_sign[static_cast<size_t>(i)] = -row_sign[static_cast<size_t>(i)];
        slack_sign[static_cast<size_t>(i)] = Scalar(-1);
      } else if (slack_col[static_cast<size_t>(i)] >= 0) {
        slack_sign[static_cast<size_t>(i)] = Scalar(1);
      }
    }
    const int total_structural = cols;

    std::vector<int> basis(static_cast<size_t>(m), -1);
    int artificials = 0;
    for (int i = 0; i < m; ++i) {
      if (slack_col[static_cast<size_t>(i)] >= 0 &&
          slack_sign[static_cast<size_t>(i)] > Scalar(0))
        basis[static_cast<size_t>(i)] = slack_col[static_cast<size_t>(i)];
      else
        ++artificials;
    }
    const int width = total_structural + artificials;

    Tableau t(m, width);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j)
        t.a[static_cast<size_t>(i)][static_cast<size_t>(j)] = a[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (slack_col[static_cast<size_t>(i)] >= 0)
        t.a[static_cast<size_t>(i)][static_cast<size_t>(slack_col[static_cast<size_t>(i)])] =
            slack_sign[static_cast<size_t>(i)];
      t.b[static_cast<size_t>(i)] = b[static_cast<size_t>(i)];
    }
    int next_art = total_structural;
    for (int i = 0; i < m; ++i)
      if (basis[static_cast<size_t>(i)] < 0) {
        t.a[static_cast<size_t>(i)][static_cast<size_t>(next_art)] = Scalar(1);
        basis[static_cast<size_t>(i)] = next_art++;
      }
    const Tableau pristine = t;  // for the final basis re-solve

    LpResult<Scalar> result;

    if (artificials > 0) {
      std::vector<Scalar> phase1(static_cast<size_t>(width), Scalar(0));
      for (int j = total_structural; j < width; ++j) phase1[static_cast<size_t>(j)] = Scalar(1);
      const LpStatus st = run(t, basis, phase1, result.iterations, pristine);
      if (st != LpStatus::Optimal) {
        result.status = st == LpStatus::Unbounded ? LpStatus::Infeasible : st;
        return result;
      }
      Scalar infeas(0);
      for (int i = 0; i < m; ++i)
        if (basis[static_cast<size_t>(i)] >= total_structural) infeas += t.b[static_cast<size_t>(i)];
      if (infeas > feasibility_slack()) {
        result.status = LpStatus::Infeasible;
        return result;
      }
      // Pivot remaining degenerate artificials out where a well-scaled pivot
      // exists; a redundant row keeps its artificial basic at (near) zero.
      for (int i = 0; i < m; ++i) {
        if (basis[static_cast<size_t>(i)] < total_structural) continue;
        int enter = -1;
        Scalar best(0);
        for (int j = 0; j < total_structural; ++j) {
          const Scalar mag = abs_value(t.a[static_cast<size_t>(i)][static_cast<size_t>(j)]);
          if (mag > best) {
            best = mag;
            enter = j;
          }
        }
        if (enter >= 0 && best > drive_out_floor()) {
          t.pivot(i, enter);
          basis[static_cast<size_t>(i)] = enter;
        }
      }
    }

    std::vector<Scalar> cost(static_cast<size_t>(width), Scalar(0));
    for (int j = 0; j < n; ++j)
      cost[static_cast<size_t>(j)] = lp.objective.empty() ? Scalar(0) : lp.objective[static_cast<size_t>(j)];
    const LpStatus st =
        run(t, basis, cost, result.iterations, pristine, total_structural,
            &result.ray, n);
    result.status = st;
    if (st != LpStatus::Optimal && st != LpStatus::Unbounded) return result;

    result.x.assign(static_cast<size_t>(n), Scalar(0));
    for (int i = 0; i < m; ++i)
      if (basis[static_cast<size_t>(i)] < n)
        result.x[static_cast<size_t>(basis[static_cast<size_t>(i)])] = t.b[static_cast<size_t>(i)];
    if (eps_ != Scalar(0)) {
      Tableau target = pristine;
      if (!lp.refine_rhs.empty())
        for (int i = 0; i < m; ++i)
          target.b[static_cast<size_t>(i)] =
              row_sign[static_cast<size_t>(i)] * lp.refine_rhs[static_cast<size_t>(i)];
      refine(target, basis, n, result.x);
    }
    result.objective = Scalar(0);
    for (int j = 0; j < n; ++j)
      if (!lp.objective.empty())
        result.objective += lp.objective[static_cast<size_t>(j)] * result.x[static_cast<size_t>(j)];
    return result;
  }

 private:
  struct Tableau {
    Tableau(int m, int width)
        : a(static_cast<size_t>(m), std::vector<Scalar>(static_cast<size_t>(width), Scalar(0))),
          b(static_cast<size_t>(m), Scalar(0)) {}
    std::vector<std::vector<Scalar>> a;
    std::vector<Scalar> b;

    void pivot(int row, int col) {
      const int m = static_cast<int>(a.size());
      const int width = static_cast<int>(a.front().size());
      const Scalar piv = a[static_cast<size_t>(row)][static_cast<size_t>(col)];
      for (int j = 0; j < width; ++j) a[static_cast<size_t>(row)][static_cast<size_t>(j)] /= piv;
      b[static_cast<size_t>(row)] /= piv;
      a[static_cast<size_t>(row)][static_cast<size_t>(col)] = Scalar(1);
      for (int i = 0; i < m; ++i) {
        if (i == row) continue;
        const Scalar f = a[static_cast<size_t>(i)][static_cast<size_t>(col)];
        if (f == Scalar(0)) continue;
        for (int j = 0; j < width; ++j)
          a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(row)][static_cast<size_t>(j)];
        a[static_cast<size_t>(i)][static_cast<size_t>(col)] = Scalar(0);
        b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(row)];
      }
    }
  };

  static Scalar abs_value(const Scalar& v) { return v < Scalar(0) ? Scalar(-v) : v; }

  Scalar feasibility_slack() const {
    // Exact arithmetic admits no slack; floating point tolerates rounding.
    return eps_ == Scalar(0) ? Scalar(0) : Scalar(1e-8);
  }

  Scalar drive_out_floor() const {
    return eps_ == Scalar(0) ? Scalar(0) : Scalar(1e-6);
  }

  // Re-solve the final basic system against the pristine data (Gaussian
  // elimination with partial pivoting), replacing the drifted tableau values
  // of the structural variables. Only used in floating point.
  void refine(const Tableau& pristine, const std::vector<int>& basis, int n,
              std::vector<Scalar>& x) const {
    const int m = static_cast<int>(pristine.a.size());
    std::vector<std::vector<Scalar>> bmat(static_cast<size_t>(m),
                                          std::vector<Scalar>(static_cast<size_t>(m + 1), Scalar(0)));
    for (int i = 0; i < m; ++i) {
      for (int q = 0; q < m; ++q)
        bmat[static_cast<size_t>(i)][static_cast<size_t>(q)] =
            pristine.a[static_cast<size_t>(i)][static_cast<size_t>(basis[static_cast<size_t>(q)])];
      bmat[static_cast<size_t>(i)][static_cast<size_t>(m)] = pristine.b[static_cast<size_t>(i)];
    }
    for (int col = 0; col < m; ++col) {
      int piv = -1;
      Scalar best(0);
      for (int i = col; i < m; ++i) {
        const Scalar mag = abs_value(bmat[static_cast<size_t>(i)][static_cast<size_t>(col)]);
        if (mag > best) {
          best = mag;
          piv = i;
        }
      }
      if (piv < 0 || !(best > Scalar(0))) return;  // keep tableau values
      std::swap(bmat[static_cast<size_t>(col)], bmat[static_cast<size_t>(piv)]);
      for (int i = 0; i < m; ++i) {
        if (i == col) continue;
        const Scalar f = bmat[static_cast<size_t>(i)][static_cast<size_t>(col)] /
                         bmat[static_cast<size_t>(col)][static_cast<size_t>(col)];
        if (f == Scalar(0)) continue;
        for (int j = col; j <= m; ++j)
          bmat[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
              f * bmat[static_cast<size_t>(col)][static_cast<size_t>(j)];
      }
    }
    for (int q = 0; q < m; ++q) {
      const Scalar value = bmat[static_cast<size_t>(q)][static_cast<size_t>(m)] /
                           bmat[static_cast<size_t>(q)][static_cast<size_t>(q)];
      const int var = basis[static_cast<size_t>(q)];
      if (var < n) x[static_cast<size_t>(var)] = value;
    }
  }

  // Rebuild the tableau as B^-1 [A | b] from the pristine data for the
  // current basis (Gauss-Jordan with partial pivoting). Kills the roundoff
  // accumulated by pivoting. Floating point only.
  bool refactor(Tableau& t, const std::vector<int>& basis,
                const Tableau& pristine) const {
    if (eps_ == Scalar(0)) return true;
    const int m = static_cast<int>(t.a.size());
    const int width = static_cast<int>(t.a.front().size());
    const int total = m + width + 1;
    std::vector<std::vector<Scalar>> g(static_cast<size_t>(m),
                                       std::vector<Scalar>(static_cast<size_t>(total), Scalar(0)));
    for (int i = 0; i < m; ++i) {
      for (int q = 0; q < m; ++q)
        g[static_cast<size_t>(i)][static_cast<size_t>(q)] =
            pristine.a[static_cast<size_t>(i)][static_cast<size_t>(basis[static_cast<size_t>(q)])];
      for (int j = 0; j < width; ++j)
        g[static_cast<size_t>(i)][static_cast<size_t>(m + j)] = pristine.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
      g[static_cast<size_t>(i)][static_cast<size_t>(m + width)] = pristine.b[static_cast<size_t>(i)];
    }
    for (int col = 0; col < m; ++col) {
      int piv = -1;
      Scalar best(0);
      for (int i = col; i < m; ++i) {
        const Scalar mag = abs_value(g[static_cast<size_t>(i)][static_cast<size_t>(col)]);
        if (mag > best) {
          best = mag;
          piv = i;
        }
      }
      if (piv < 0 || !(best > Scalar(1e-12))) return false;  // singular basis
      std::swap(g[static_cast<size_t>(col)], g[static_cast<size_t>(piv)]);
      const Scalar d = g[static_cast<size_t>(col)][static_cast<size_t>(col)];
      for (int j = col; j < total; ++j) g[static_cast<size_t>(col)][static_cast<size_t>(j)] /= d;
      for (int i = 0; i < m; ++i) {
        if (i == col) continue;
        const Scalar f = g[static_cast<size_t>(i)][static_cast<size_t>(col)];
        if (f == Scalar(0)) continue;
        for (int j = col; j < total; ++j)
          g[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * g[static_cast<size_t>(col)][static_cast<size_t>(j)];
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < width; ++j)
        t.a[static_cast<size_t>(i)][static_cast<size_t>(j)] = g[static_cast<size_t>(i)][static_cast<size_t>(m + j)];
      Scalar bi = g[static_cast<size_t>(i)][static_cast<size_t>(m + width)];
      if (bi < Scalar(0)) {
        if (bi < Scalar(-1e-7)) return false;  // basis lost feasibility
        bi = Scalar(0);
      }
      t.b[static_cast<size_t>(i)] = bi;
    }
    return true;
  }

  // Simplex iterations. Entering column: most negative reduced cost (lowest
  // index on ties). Leaving row: lexicographic rule over (b, then the columns
  // ordered so the phase's starting basis columns come first), which is the
  // classical cycle-free choice and keeps every solve deterministic. The
  // tableau is refactorized from pristine data periodically to shed pivot
  // roundoff. Columns at or beyond `col_limit` (the artificials in phase 2)
  // never enter the basis.
  LpStatus run(Tableau& t, std::vector<int>& basis, const std::vector<Scalar>& cost,
               long& iterations, const Tableau& pristine, int col_limit = -1,
               std::vector<Scalar>* ray_out = nullptr, int ray_vars = 0) const {
    const int m = static_cast<int>(t.a.size());
    const int width = static_cast<int>(t.a.front().size());
    const int limit = col_limit < 0 ? width : col_limit;
    long local_iterations = 0;

    // Lexicographic comparison order: starting basis columns first (the rows
    // are lex-positive in this order), then the remaining columns.
    std::vector<int> lex_cols;
    lex_cols.reserve(static_cast<size_t>(width));
    {
      std::vector<char> used(static_cast<size_t>(width), 0);
      for (int i = 0; i < m; ++i) {
        lex_cols.push_back(basis[static_cast<size_t>(i)]);
        used[static_cast<size_t>(basis[static_cast<size_t>(i)])] = 1;
      }
      for (int j = 0; j < width; ++j)
        if (!used[static_cast<size_t>(j)]) lex_cols.push_back(j);
    }

    while (true) {
      if (++iterations > cap_) return LpStatus::IterationLimit;
      if (++local_iterations % 64 == 0 && !refactor(t, basis, pristine))
        return LpStatus::IterationLimit;

      // Reduced costs from the basis: c_j - c_B . B^-1 A_j.
      std::vector<Scalar> y(static_cast<size_t>(m), Scalar(0));
      std::vector<char> basic(static_cast<size_t>(width), 0);
      for (int i = 0; i < m; ++i) {
        y[static_cast<size_t>(i)] = cost[static_cast<size_t>(basis[static_cast<size_t>(i)])];
        basic[static_cast<size_t>(basis[static_cast<size_t>(i)])] = 1;
      }

      int enter = -1;
      Scalar enter_reduced(0);
      for (int j = 0; j < limit; ++j) {
        if (basic[static_cast<size_t>(j)]) continue;
        Scalar reduced = cost[static_cast<size_t>(j)];
        for (int i = 0; i < m; ++i)
          reduced -= y[static_cast<size_t>(i)] * t.a[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (reduced < -eps_ && (enter < 0 || reduced < enter_reduced)) {
          enter = j;
          enter_reduced = reduced;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      int leave = -1;
      for (int i = 0; i < m; ++i) {
        const Scalar coeff = t.a[static_cast<size_t>(i)][static_cast<size_t>(enter)];
        if (coeff <= eps_) continue;
        if (leave < 0) {
          leave = i;
          continue;
        }
        if (lex_smaller(t, i, leave, enter, lex_cols)) leave = i;
      }
      if (leave < 0) {
        // The entering column has no blocking row; the corresponding edge of
        // the polyhedron is an improving ray.
        if (ray_out && ray_vars > 0) {
          ray_out->assign(static_cast<size_t>(ray_vars), Scalar(0));
          if (enter < ray_vars) (*ray_out)[static_cast<size_t>(enter)] = Scalar(1);
          for (int i = 0; i < m; ++i)
            if (basis[static_cast<size_t>(i)] < ray_vars)
              (*ray_out)[static_cast<size_t>(basis[static_cast<size_t>(i)])] =
                  -t.a[static_cast<size_t>(i)][static_cast<size_t>(enter)];
        }
        return LpStatus::Unbounded;
      }
      t.pivot(leave, enter);
      basis[static_cast<size_t>(leave)] = enter;
    }
  }

  // True iff row i precedes row j under the lexicographic ratio order for
  // the given entering column.
  bool lex_smaller(const Tableau& t, int i, int j, int enter,
                   const std::vector<int>& lex_cols) const {
    // Compare a_i/c_i against a_j/c_j by cross multiplication (both pivots
    // are positive), which is division-free for exact scalars.
    const Scalar ci = t.a[static_cast<size_t>(i)][static_cast<size_t>(enter)];
    const Scalar cj = t.a[static_cast<size_t>(j)][static_cast<size_t>(enter)];
    {
      const Scalar vi = t.b[static_cast<size_t>(i)] * cj;
      const Scalar vj = t.b[static_cast<size_t>(j)] * ci;
      if (vi < vj) return true;
      if (vj < vi) return false;
    }
    for (int col : lex_cols) {
      const Scalar vi = t.a[static_cast<size_t>(i)][static_cast<size_t>(col)] * cj;
      const Scalar vj = t.a[static_cast<size_t>(j)][static_cast<size_t>(col)] * ci;
      if (vi < vj) return true;
      if (vj < vi) return false;
    }
    return i < j;
  }

  Scalar eps_;
  long cap_;
};

}  // namespace pflattice
