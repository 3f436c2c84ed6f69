#include "pflattice/verify.hpp"

#include "pflattice/lattice.hpp"
#include "pflattice/perron.hpp"
#include "pflattice/serialize.hpp"
#include "pflattice/spectral.hpp"

#include "pflattice/matrix_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <regex>

using namespace pflattice;

namespace {

PosMatrix from(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<std::vector<double>> data;
  for (const auto& r : rows) data.emplace_back(r);
  return PosMatrix::from_rows(data);
}

std::string without_wall_time(std::string text) {
  static const std::regex wall(R"#("wall_time_ms":[^}]*)#");
  return std::regex_replace(text, wall, "");
}

}  // namespace

TEST_CASE("random irreducible matrices are strongly connected by construction") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 5);
    const auto a = random_irreducible(n, 0.3, seed);
    CHECK(is_ideal_irreducible(a).irreducible);
    // oracle at small n: no nontrivial invariant subset exists
    bool any = false;
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      CoordinateIdeal s(n);
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) s.add(i);
      if (is_invariant_ideal(a, s)) any = true;
    }
    CHECK_FALSE(any);
  }
}

TEST_CASE("density zero keeps only the Hamiltonian cycle") {
  const auto a = random_irreducible(4, 0.0, 9);
  int nonzero = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (a(i, j) > 0.0) ++nonzero;
  CHECK(nonzero == 4);
  // density one fills the matrix
  CHECK(random_irreducible(4, 1.0, 9).mat().minCoeff() > 0.0);
}

TEST_CASE("random irreducible generation is deterministic per seed") {
  const auto a = random_irreducible(5, 0.4, 1234);
  const auto b = random_irreducible(5, 0.4, 1234);
  CHECK(max_abs(a.mat() - b.mat()) == 0.0);
  CHECK_THROWS_AS(random_irreducible(1, 0.5, 0), InvalidArgument);
  CHECK_THROWS_AS(random_irreducible(3, 2.0, 0), InvalidArgument);
}

TEST_CASE("structured peripheral operators satisfy the extraction hypothesis") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const auto k = random_peripheral_structured(n, seed);
    const auto st = peripheral_cycle_structure(k);
    CHECK(st.rank >= 1);
    CHECK(is_quasi_interior(st.x0).quasi_interior);
  }
}

TEST_CASE("reducibility detectors: vanishing radius") {
  const auto fired = reducibility_detectors(PosMatrix::identity(2),
                                            from({{0, 1}, {0, 0}}), Side::Right);
  REQUIRE(!fired.empty());
  CHECK(fired.front().id == "radius-zero");
  CHECK(fired.front().witness == CoordinateIdeal::of(2, {0}));
}

TEST_CASE("reducibility detectors: local radius deficiency on a diagonal") {
  const PosMatrix d = from({{2, 0}, {0, 1}});
  const auto fired = reducibility_detectors(d, d, Side::Right);
  bool saw_local = false;
  for (const auto& c : fired) {
    if (c.id == "local-radius-deficiency" || c.id == "dual-local-radius-deficiency")
      saw_local = true;
    CHECK_FALSE(c.witness.is_trivial());
    CHECK(is_invariant_ideal(d, c.witness));
  }
  CHECK(saw_local);
}

TEST_CASE("reducibility detectors stay silent for irreducible pairs") {
  const PosMatrix ones =
      from({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}});
  const PosMatrix k =
      from({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  CHECK(reducibility_detectors(ones, k, Side::Right).empty());
}

TEST_CASE("comparison check: strict domination drops the radius") {
  const PosMatrix cyclic = from({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  Matrix b = cyclic.mat();
  b(0, 2) = 0.5;
  const auto rep = comparison_check(cyclic, PosMatrix(b));
  CHECK(rep.radius_a == doctest::Approx(1.0).epsilon(1e-12));
  // oracle: the cycle-weight product halves, so r(B) is the cube root of 1/2
  CHECK(std::pow(rep.radius_b, 3) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.margin > 0.0);

  const auto equal = comparison_check(cyclic, cyclic);
  CHECK(equal.equal_inputs);
  CHECK(equal.margin == doctest::Approx(0.0));

  const PosMatrix ones =
      from({{1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}, {1, 1, 1, 1}});
  Matrix hole = ones.mat();
  hole(0, 0) = 0.0;
  const auto rep2 = comparison_check(ones, PosMatrix(hole));
  CHECK(rep2.radius_b < 4.0);
  CHECK_THROWS_AS(comparison_check(PosMatrix(hole), ones), PreconditionViolation);
}

TEST_CASE("suite configuration validation") {
  SuiteConfig config;
  config.trials = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = SuiteConfig{};
  config.n_values = {1};
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  config = SuiteConfig{};
  config.properties = {"nonsense"};
  CHECK_THROWS_AS(config.validate(), InvalidArgument);
  CHECK(suite_property_names().size() == 13);
}

TEST_CASE("a small theorem suite passes across every property") {
  SuiteConfig config;
  config.n_values = {4};
  config.trials = 8;
  config.seed = 42;
  const auto report = run_theorem_suite(config);
  CHECK(report.total_fail == 0);
  CHECK(report.properties.size() == suite_property_names().size());
  for (const auto& p : report.properties) CHECK(p.pass + p.skipped == config.trials);
}

TEST_CASE("property selection runs just the requested checks") {
  SuiteConfig config;
  config.n_values = {3};
  config.trials = 5;
  config.seed = 1;
  config.properties = {"turo", "compa"};
  const auto report = run_theorem_suite(config);
  REQUIRE(report.properties.size() == 2);
  CHECK(report.properties[0].name == "turo");
  CHECK(report.properties[1].name == "compa");
  CHECK(report.all_passed());
}

TEST_CASE("identical configurations serialize identically") {
  SuiteConfig config;
  config.n_values = {4};
  config.trials = 12;
  config.seed = 42;
  const std::string a = json_suite_report(run_theorem_suite(config)).dump();
  const std::string b = json_suite_report(run_theorem_suite(config)).dump();
  CHECK(without_wall_time(a) == without_wall_time(b));
  config.seed = 43;
  const std::string c = json_suite_report(run_theorem_suite(config)).dump();
  CHECK(without_wall_time(a) != without_wall_time(c));
}

TEST_CASE("counterexample payloads round-trip through the matrix format") {
  // force a failing property by hand: a reducible matrix violates the
  // irreducibility certificate check used inside the oracle property only if
  // the implementation were broken, so instead serialize a payload directly.
  Counterexample ce;
  ce.trial = 3;
  ce.trial_seed = 777;
  ce.detail = "demo";
  ce.matrices.emplace_back("T", from({{0, 1}, {2, 0.5}}).mat());
  PropertyResult pr;
  pr.name = "demo";
  pr.fail = 1;
  pr.counterexample = ce;
  SuiteReport rep;
  rep.seed = 1;
  rep.n_values = {2};
  rep.trials = 1;
  rep.properties.push_back(pr);
  const std::string text = json_suite_report(rep).dump();
  // the embedded matrix object parses back exactly through the file format
  const auto doc = nlohmann::json::parse(text);
  const auto obj = doc["properties"][0]["counterexample"]["matrices"][0]["matrix"];
  const auto parsed = parse_matrix_json(obj.dump());
  CHECK(parsed(1, 0) == 2.0);
  CHECK(parsed(1, 1) == 0.5);
}
