#include "pflattice/commutant.hpp"

#include "pflattice/lattice.hpp"
#include "pflattice/perron.hpp"
#include "pflattice/simplex.hpp"
#include "pflattice/verify.hpp"

#include <doctest.h>

#include <random>

using namespace pflattice;

namespace {

PosMatrix from(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> data;
  for (const auto& r : rows) data.emplace_back(r);
  return PosMatrix::from_rows(data);
}

const PosMatrix kDiag21 = from({{2, 0}, {0, 1}});
const PosMatrix kSwapDiag =
    from({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});

double violation(const Matrix& a, const Matrix& k, Side side) {
  const Matrix c = a * k - k * a;
  return side == Side::Right ? std::max(0.0, -c.minCoeff())
                             : std::max(0.0, c.maxCoeff());
}

}  // namespace

TEST_CASE("the simplex solver handles a textbook program") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6  ->  optimum at (8/5, 6/5)
  LinearProgram<double> lp;
  lp.num_vars = 2;
  lp.objective = {-1.0, -1.0};
  lp.add_row({1.0, 2.0}, ConstraintOp::Le, 4.0);
  lp.add_row({3.0, 1.0}, ConstraintOp::Le, 6.0);
  const SimplexSolver<double> solver(1e-9);
  const auto res = solver.solve(lp);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x[0] == doctest::Approx(1.6).epsilon(1e-9));
  CHECK(res.x[1] == doctest::Approx(1.2).epsilon(1e-9));

  LinearProgram<double> infeasible;
  infeasible.num_vars = 1;
  infeasible.objective = {0.0};
  infeasible.add_row({1.0}, ConstraintOp::Ge, 2.0);
  infeasible.add_row({1.0}, ConstraintOp::Le, 1.0);
  CHECK(solver.solve(infeasible).status == LpStatus::Infeasible);

  LinearProgram<double> unbounded;
  unbounded.num_vars = 2;
  unbounded.objective = {-1.0, 0.0};
  unbounded.add_row({1.0, 1.0}, ConstraintOp::Ge, 1.0);
  const auto ub = solver.solve(unbounded);
  CHECK(ub.status == LpStatus::Unbounded);
  // the reported ray improves the objective and respects the constraints
  REQUIRE(ub.ray.size() == 2);
  CHECK(ub.ray[0] * unbounded.objective[0] + ub.ray[1] * unbounded.objective[1] < 0.0);
  CHECK(ub.ray[0] + ub.ray[1] >= 0.0);
}

TEST_CASE("semi-commutation feasibility for a diagonal operator") {
  // (AK - KA)_(i,j) = A_(i,j) (K_jj - K_ii) for diagonal K
  const auto below = semi_commutant_feasible(kDiag21, Side::Right, 1, 0);
  CHECK(below.feasible);
  REQUIRE(below.witness.has_value());
  CHECK(violation(below.witness->mat(), kDiag21.mat(), Side::Right) <= 1e-8);
  CHECK((*below.witness)(1, 0) == doctest::Approx(1.0).epsilon(1e-9));

  const auto above = semi_commutant_feasible(kDiag21, Side::Right, 0, 1);
  CHECK_FALSE(above.feasible);

  // the identity pins any diagonal entry
  CHECK(semi_commutant_feasible(kDiag21, Side::Right, 0, 0).feasible);
  CHECK(semi_commutant_feasible(kDiag21, Side::Left, 1, 1).feasible);
}

TEST_CASE("super-commutant relation of the diagonal operator") {
  const auto right = super_commutant_relation(kDiag21, Side::Right);
  CHECK(right.edge(0, 0));
  CHECK(right.edge(1, 1));
  CHECK(right.edge(1, 0));
  CHECK_FALSE(right.edge(0, 1));
  const auto left = super_commutant_relation(kDiag21, Side::Left);
  CHECK(left.edge(0, 1));
  CHECK_FALSE(left.edge(1, 0));
}

TEST_CASE("the swap-plus-identity operator has full relations on both sides") {
  for (Side side : {Side::Right, Side::Left}) {
    const auto rel = super_commutant_relation(kSwapDiag, side, Tolerances{},
                                              /*keep_witnesses=*/true);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        CHECK(rel.edge(i, j));
        REQUIRE(rel.witnesses[static_cast<size_t>(i)][static_cast<size_t>(j)].has_value());
        const PosMatrix& w =
            *rel.witnesses[static_cast<size_t>(i)][static_cast<size_t>(j)];
        CHECK(violation(w.mat(), kSwapDiag.mat(), side) <= 1e-7);
        CHECK(w(i, j) == doctest::Approx(1.0).epsilon(1e-7));
      }
  }
}

TEST_CASE("super-commutant irreducibility certificates") {
  CHECK(is_super_commutant_irreducible(kSwapDiag, Side::Right).irreducible);
  CHECK(is_super_commutant_irreducible(kSwapDiag, Side::Left).irreducible);

  const auto diag = is_super_commutant_irreducible(kDiag21, Side::Right);
  CHECK_FALSE(diag.irreducible);
  REQUIRE(diag.witness.has_value());
  CHECK(*diag.witness == CoordinateIdeal::of(2, {1}));

  const auto nil = is_super_commutant_irreducible(from({{0, 1}, {0, 0}}), Side::Right);
  CHECK_FALSE(nil.irreducible);
  CHECK(*nil.witness == CoordinateIdeal::of(2, {0}));
}

TEST_CASE("commutant equality gaps") {
  const auto swap_gaps = commutant_equality_gap(kSwapDiag);
  CHECK(swap_gaps.gap_right <= 1e-7);
  CHECK(swap_gaps.gap_left <= 1e-7);

  const auto diag_gaps = commutant_equality_gap(kDiag21);
  // witness E21 reaches commutator mass 1 at the unit-mass normalization;
  // the exact optimum is 1 (pinned below in rational arithmetic)
  CHECK(diag_gaps.gap_right == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(diag_gaps.gap_left == doctest::Approx(1.0).epsilon(1e-7));

  const auto id_gaps = commutant_equality_gap(PosMatrix::identity(2));
  CHECK(id_gaps.gap_right == doctest::Approx(0.0));
  CHECK(id_gaps.gap_left == doctest::Approx(0.0));
}

TEST_CASE("exact rational gaps pin the golden outcomes") {
  const auto swap_exact = commutant_equality_gap_exact(kSwapDiag);
  CHECK(swap_exact.first == "0");
  CHECK(swap_exact.second == "0");
  const auto diag_exact = commutant_equality_gap_exact(kDiag21);
  CHECK(diag_exact.first == "1");
  CHECK(diag_exact.second == "1");
  const auto id_exact = commutant_equality_gap_exact(PosMatrix::identity(2));
  CHECK(id_exact.first == "0");
  CHECK(id_exact.second == "0");
}

TEST_CASE("sampling the cone of a diagonal operator yields lower triangles") {
  const auto s = sample_semi_commuting(kDiag21, Side::Right, 7, 6);
  REQUIRE(static_cast<int>(s.samples.size()) >= 2);
  for (const auto& a : s.samples) {
    CHECK(a(0, 1) <= 1e-8);  // upper entry is forbidden by the sign analysis
    CHECK(violation(a.mat(), kDiag21.mat(), Side::Right) <=
          1e-8 * std::max(1.0, max_abs(a.mat())));
  }
}

TEST_CASE("sampling always includes the identity and the operator itself") {
  const auto s = sample_semi_commuting(kSwapDiag, Side::Right, 3, 5);
  REQUIRE(s.samples.size() >= 2);
  CHECK(max_abs(s.samples[0].mat() - Matrix::Identity(4, 4)) == 0.0);
  CHECK(max_abs(s.samples[1].mat() - kSwapDiag.mat()) == 0.0);
  // under the collapse, every sampled member commutes
  for (const auto& a : s.samples)
    CHECK(inf_norm(a.mat() * kSwapDiag.mat() - kSwapDiag.mat() * a.mat()) <=
          1e-7 * inf_norm(a.mat()));
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const auto s1 = sample_semi_commuting(kSwapDiag, Side::Right, 99, 6);
  const auto s2 = sample_semi_commuting(kSwapDiag, Side::Right, 99, 6);
  REQUIRE(s1.samples.size() == s2.samples.size());
  for (size_t i = 0; i < s1.samples.size(); ++i)
    CHECK(max_abs(s1.samples[i].mat() - s2.samples[i].mat()) == 0.0);
  CHECK(sample_semi_commuting(kSwapDiag, Side::Right, 100, 6).samples[2].mat() !=
        s1.samples[2].mat());
  CHECK_THROWS_AS(sample_semi_commuting(kSwapDiag, Side::Right, 1, 0),
                  InvalidArgument);
}

TEST_CASE("super-commutant irreducibility forces the collapse and the structure") {
  // joint check: when a side is irreducible, the equality gap vanishes and
  // the peripheral cycle structure extracts cleanly
  for (uint64_t seed = 0; seed < 4; ++seed) {
    const PosMatrix k = random_peripheral_structured(4, seed);
    const auto cert = is_super_commutant_irreducible(k, Side::Right);
    if (!cert.irreducible) continue;
    const auto gaps = commutant_equality_gap(k);
    const double bound = 1e-7 * std::max(1.0, inf_norm(k.mat()));
    CHECK(gaps.gap_right <= bound);
    CHECK(gaps.gap_left <= bound);
    CHECK_NOTHROW(peripheral_cycle_structure(k));
  }
}

TEST_CASE("relation completeness at small n: cone samples stay inside") {
  std::mt19937_64 rng(2024);
  auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int instance = 0; instance < 4; ++instance) {
    const int n = 2 + (instance % 2);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u01() < 0.6 ? u01() : 0.0;
    const PosMatrix k(m);
    const Side side = instance % 2 == 0 ? Side::Right : Side::Left;
    const auto rel = super_commutant_relation(k, side);
    const auto pool = sample_semi_commuting(k, side, 55 + instance, 10);
    std::vector<Matrix> members;
    for (const auto& a : pool.samples) members.push_back(a.mat());
    // dense sampling: random convex combinations of pool members
    for (int t = 0; t < 10000; ++t) {
      Matrix a = Matrix::Zero(n, n);
      double total = 0.0;
      for (int p = 0; p < 3; ++p) {
        const double w = u01() + 1e-6;
        a += w * members[rng() % members.size()];
        total += w;
      }
      a /= total;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (a(i, j) > 1e-7 * std::max(1.0, max_abs(a))) CHECK(rel.edge(i, j));
    }
  }
}
