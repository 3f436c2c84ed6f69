#include "pflattice/triangularize.hpp"

#include "pflattice/commutant.hpp"
#include "pflattice/lattice.hpp"
#include "pflattice/spectral.hpp"

#include <doctest.h>

#include <random>

using namespace pflattice;

namespace {

PosMatrix from(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> data;
  for (const auto& r : rows) data.emplace_back(r);
  return PosMatrix::from_rows(data);
}

const PosMatrix kSwapDiag =
    from({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
const PosMatrix kOnes =
    from({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}});

// Predecessor surrogate: the union of all strictly smaller links must itself
// be a link of the chain.
void check_predecessors(const IdealChain& chain) {
  for (size_t k = 0; k < chain.links.size(); ++k) {
    CoordinateIdeal pred(chain.links[k].dim());
    for (size_t q = 0; q < k; ++q) pred = pred.united(chain.links[q]);
    bool found = false;
    for (const auto& link : chain.links)
      if (link == pred) found = true;
    CHECK(found);
  }
}

// No coordinate ideal fits strictly between consecutive links of a maximal
// chain (exhaustive check at small n).
void check_no_between(const IdealChain& chain) {
  const int n = chain.dim();
  REQUIRE(n <= 6);
  for (size_t k = 1; k < chain.links.size(); ++k) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      CoordinateIdeal s(n);
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) s.add(i);
      if (chain.links[k - 1].is_subset_of(s) && s.is_subset_of(chain.links[k]) &&
          !(s == chain.links[k - 1]) && !(s == chain.links[k])) {
        CHECK(false);
      }
    }
  }
}

}  // namespace

TEST_CASE("invariant ideal chain of an upper triangular operator") {
  const auto chain = invariant_ideal_chain(from({{1, 1}, {0, 1}}));
  REQUIRE(chain.links.size() == 3);
  CHECK(chain.links[0].is_empty());
  CHECK(chain.links[1] == CoordinateIdeal::of(2, {0}));
  CHECK(chain.links[2].is_full());
  CHECK(chain.maximal);
}

TEST_CASE("invariant ideal chain of an irreducible operator has no interior link") {
  const auto chain = invariant_ideal_chain(kOnes);
  REQUIRE(chain.links.size() == 2);
  CHECK(chain.links[0].is_empty());
  CHECK(chain.links[1].is_full());
  CHECK_FALSE(chain.maximal);
}

TEST_CASE("invariant ideal chain of the block-diagonal operator") {
  const auto chain = invariant_ideal_chain(kSwapDiag);
  // smallest-contained-coordinate-first over the components {0,1},{2},{3}
  REQUIRE(chain.links.size() == 4);
  CHECK(chain.links[1] == CoordinateIdeal::of(4, {0, 1}));
  CHECK(chain.links[2] == CoordinateIdeal::of(4, {0, 1, 2}));
  CHECK(chain.links[3].is_full());
  for (const auto& link : chain.links) CHECK(is_invariant_ideal(kSwapDiag, link));
  check_predecessors(chain);
}

TEST_CASE("refinement keeps a maximal chain unchanged") {
  const auto chain = invariant_ideal_chain(from({{1, 1}, {0, 1}}));
  const Matrix zero = Matrix::Zero(2, 2);
  const auto refined = refine_to_maximal_chain(chain, zero);
  REQUIRE(refined.links.size() == chain.links.size());
  for (size_t k = 0; k < refined.links.size(); ++k)
    CHECK(refined.links[k] == chain.links[k]);
}

TEST_CASE("refinement inserts singletons in increasing coordinate order") {
  IdealChain coarse;
  coarse.links.push_back(CoordinateIdeal(4));
  coarse.links.push_back(CoordinateIdeal::full(4));
  const auto refined = refine_to_maximal_chain(coarse, Matrix::Zero(4, 4));
  REQUIRE(refined.links.size() == 5);
  CHECK(refined.maximal);
  CHECK(refined.links[1] == CoordinateIdeal::of(4, {0}));
  CHECK(refined.links[2] == CoordinateIdeal::of(4, {0, 1}));
  CHECK(refined.links[3] == CoordinateIdeal::of(4, {0, 1, 2}));
  check_predecessors(refined);
  check_no_between(refined);
}

TEST_CASE("refinement fails loudly on a nonzero quotient block") {
  IdealChain coarse;
  coarse.links.push_back(CoordinateIdeal(2));
  coarse.links.push_back(CoordinateIdeal::full(2));
  Matrix s(2, 2);
  s << 0, 1, 0, 0;
  CHECK_THROWS_AS(refine_to_maximal_chain(coarse, s), QuotientNotScalarZero);
}

TEST_CASE("commutator nilpotency: commuting pair gives the trivial certificate") {
  const auto cert = commutator_nilpotency(kOnes, kSwapDiag);
  CHECK(cert.index == 1);
  CHECK(cert.radius <= 1e-6);
  CHECK(inf_norm(cert.commutator) < 1e-12);
  CHECK(cert.chain.maximal);
  CHECK(cert.chain.links.size() == 5);
  // the chain triangularizes the commutator: every link is S-invariant
  for (const auto& link : cert.chain.links)
    CHECK(is_invariant_ideal(cert.commutator, link, 1e-9));
}

TEST_CASE("commutator nilpotency: the worked two-by-two pair") {
  const PosMatrix t = from({{1, 1}, {0, 1}});
  const PosMatrix k = from({{1, 0}, {0, 0}});
  // oracle: TK - KT = [[0,-1],[0,0]], semi-commuting and nilpotent of index 2
  const Matrix s = t.mat() * k.mat() - k.mat() * t.mat();
  CHECK(s(0, 1) == doctest::Approx(-1.0));
  const auto cert = commutator_nilpotency(t, k);
  CHECK(cert.index == 2);
  REQUIRE(cert.chain.links.size() == 3);
  CHECK(cert.chain.links[1] == CoordinateIdeal::of(2, {0}));
  CHECK(cert.radius <= 1e-6);
  REQUIRE(cert.permuted_form.size() == 2);
  CHECK(cert.permuted_form[0] == 0);
  CHECK(cert.permuted_form[1] == 1);
}

TEST_CASE("commutator nilpotency: self-commutation") {
  const PosMatrix cyclic = from({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  const auto cert = commutator_nilpotency(cyclic, cyclic);
  CHECK(cert.index == 1);
}

TEST_CASE("commutator nilpotency rejects non-semi-commuting pairs") {
  const PosMatrix t = from({{0, 1}, {0, 0}});
  const PosMatrix k = from({{0, 0}, {1, 0}});
  // TK - KT = diag(1, -1): both signs present
  CHECK_THROWS_AS(commutator_nilpotency(t, k), PreconditionViolation);
  CHECK_THROWS_AS(commutator_nilpotency(t, from({{0, 0}, {0, 0}})),
                  PreconditionViolation);
}

TEST_CASE("certified chains triangularize sampled semi-commuting pairs") {
  std::mt19937_64 rng(808);
  auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u01() < 0.5 ? u01() : 0.0;
    if (max_abs(m) == 0.0) m(0, 0) = 1.0;
    const PosMatrix k(m);
    const Side side = trial % 2 == 0 ? Side::Right : Side::Left;
    const auto samples = sample_semi_commuting(k, side, 1000 + trial, 4);
    const PosMatrix& t = samples.samples.back();
    if (inf_norm(t.mat()) <= 1e-9) continue;
    const auto cert = commutator_nilpotency(t, k);
    CHECK(cert.index <= n);
    CHECK(cert.chain.maximal);
    CHECK(cert.radius <= 1e-6 * std::max(1.0, inf_norm(cert.commutator)));
    // Ringrose consistency: the triangular order nullifies the diagonal
    const double threshold =
        1e-9 * std::max(inf_norm(cert.commutator),
                        inf_norm(t.mat()) * inf_norm(k.mat()));
    for (int a = 0; a < n; ++a)
      CHECK(std::abs(cert.commutator(cert.permuted_form[static_cast<size_t>(a)],
                                     cert.permuted_form[static_cast<size_t>(a)])) <=
            threshold);
    check_predecessors(cert.chain);
    if (n <= 6) check_no_between(cert.chain);
  }
}
