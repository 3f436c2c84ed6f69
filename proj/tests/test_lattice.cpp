#include "pflattice/lattice.hpp"

#include <doctest.h>

#include <random>

using namespace pflattice;

namespace {

PosMatrix from(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> data;
  for (const auto& r : rows) data.emplace_back(r);
  return PosMatrix::from_rows(data);
}

Vec vec(std::initializer_list<double> entries) {
  Vec v(static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) v(i++) = e;
  return v;
}

}  // namespace

TEST_CASE("support of a vector collects entries above the zero threshold") {
  CHECK(support_of(vec({1, 0, 2, 0})) == CoordinateIdeal::of(4, {0, 2}));
  CHECK(support_of(vec({0, 0, 0, 0})).is_empty());
  // a strictly positive vector generates the whole space
  CHECK(support_of(vec({1, 1, 1, 1})).is_full());
}

TEST_CASE("support of a set of vectors is the union") {
  const std::vector<Vec> vs = {vec({1, 0, 0}), vec({0, 0, 2})};
  CHECK(support_of(vs) == CoordinateIdeal::of(3, {0, 2}));
}

TEST_CASE("support is monotone: 0 <= u <= v implies support(u) in support(v)") {
  std::mt19937_64 rng(17);
  auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    Vec v(n), u(n);
    for (int i = 0; i < n; ++i) {
      v(i) = u01() < 0.3 ? 0.0 : u01();
      u(i) = v(i) * u01();
    }
    CHECK(support_of(u).is_subset_of(support_of(v)));
  }
}

TEST_CASE("invariance of coordinate ideals under one operator") {
  CHECK(is_invariant_ideal(from({{1, 1}, {0, 1}}), CoordinateIdeal::of(2, {0})));
  // the all-ones operator leaves no nontrivial ideal invariant
  const PosMatrix ones = from({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}});
  for (unsigned mask = 1; mask + 1 < 16; ++mask) {
    CoordinateIdeal s(4);
    for (int i = 0; i < 4; ++i)
      if (mask & (1u << i)) s.add(i);
    CHECK_FALSE(is_invariant_ideal(ones, s));
  }
  // block-diagonal support: the swap block is invariant
  const PosMatrix k =
      from({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK(is_invariant_ideal(k, CoordinateIdeal::of(4, {2, 3})));
  CHECK(is_invariant_ideal(k, CoordinateIdeal::of(4, {0, 1})));
  CHECK_FALSE(is_invariant_ideal(k, CoordinateIdeal::of(4, {0})));
}

TEST_CASE("invariance is closed under sums and products") {
  std::mt19937_64 rng(99);
  auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    CoordinateIdeal s(n);
    for (int i = 0; i < n; ++i)
      if (u01() < 0.5) s.add(i);
    auto random_invariant = [&]() {
      Matrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          m(i, j) = u01();
          if (!s.contains(i) && s.contains(j)) m(i, j) = 0.0;
        }
      return PosMatrix(m);
    };
    const PosMatrix a = random_invariant();
    const PosMatrix b = random_invariant();
    REQUIRE(is_invariant_ideal(a, s));
    REQUIRE(is_invariant_ideal(b, s));
    CHECK(is_invariant_ideal(PosMatrix(a.mat() * b.mat()), s));
    CHECK(is_invariant_ideal(PosMatrix(a.mat() + b.mat()), s));
  }
}

TEST_CASE("entrywise invariance agrees with the action on basis vectors") {
  // brute force over all subsets at small n
  std::mt19937_64 rng(4242);
  auto u01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 5);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = u01() < 0.4 ? u01() : 0.0;
    const PosMatrix a(m);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      CoordinateIdeal s(n);
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) s.add(i);
      bool by_action = true;
      for (int j = 0; j < n && by_action; ++j) {
        if (!s.contains(j)) continue;
        if (!support_of(Vec(a.mat().col(j))).is_subset_of(s)) by_action = false;
      }
      CHECK(is_invariant_ideal(a, s) == by_action);
    }
  }
}

TEST_CASE("quasi-interior points are exactly the strictly positive vectors") {
  CHECK(is_quasi_interior(vec({1, 1, 1, 1})).quasi_interior);
  const auto r = is_quasi_interior(vec({1, 0, 1, 1}));
  CHECK_FALSE(r.quasi_interior);
  REQUIRE(r.violation_index.has_value());
  CHECK(*r.violation_index == 1);  // 0-based; reported as index 2 externally
  CHECK(is_quasi_interior(vec({1, 1, 2, 2})).quasi_interior);
  CHECK_THROWS_AS(is_quasi_interior(vec({1, -1})), InvalidArgument);
}

TEST_CASE("PosMatrix construction clamps tiny negatives and rejects real ones") {
  Matrix m(2, 2);
  m << 1.0, -0.5e-9, 0.0, 1.0;
  const PosMatrix a(m);
  CHECK(a(0, 1) == 0.0);
  Matrix bad(2, 2);
  bad << 1.0, -1e-6, 0.0, 1.0;
  CHECK_THROWS_AS(PosMatrix{bad}, InvalidArgument);
  Matrix tiny(1, 1);
  tiny << 1.0;
  CHECK_THROWS_AS(PosMatrix{tiny}, InvalidArgument);
}

TEST_CASE("tolerances validate") {
  Tolerances tol;
  tol.zero = 2.0;
  CHECK_THROWS_AS(tol.validate(), InvalidArgument);
  tol = Tolerances{};
  tol.lp_eps = 0.0;
  CHECK_THROWS_AS(tol.validate(), InvalidArgument);
}
