#pragma once

#include "pflattice/commutant.hpp"
#include "pflattice/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pflattice {

struct SuiteConfig {
  std::vector<int> n_values = {3, 4, 5};
  int trials = 50;
  uint64_t seed = 0;
  Tolerances tol;
  /// Names of the properties to run; empty selects all of them.
  std::vector<std::string> properties;

  void validate() const;
};

struct Counterexample {
  int trial = 0;
  uint64_t trial_seed = 0;
  std::string detail;
  std::vector<std::pair<std::string, Matrix>> matrices;
};

struct PropertyResult {
  std::string name;
  int pass = 0;
  int fail = 0;
  int skipped = 0;
  /// Smallest margin observed over all non-skipped trials; negative margins
  /// are failures. Unset when every trial was skipped.
  std::optional<double> worst_margin;
  std::string skip_reason;
  std::optional<Counterexample> counterexample;
};

struct SuiteReport {
  uint64_t seed = 0;
  std::vector<int> n_values;
  int trials = 0;
  Tolerances tol;
  std::vector<PropertyResult> properties;
  int total_pass = 0;
  int total_fail = 0;
  int total_skipped = 0;
  double wall_ms = 0.0;

  bool all_passed() const { return total_fail == 0; }
};

/// Names of all suite properties in registry order.
std::vector<std::string> suite_property_names();

/// Run the selected theorem properties over seeded random instances.
/// Identical configs produce identical reports (wall time aside).
SuiteReport run_theorem_suite(const SuiteConfig& config);

/// Strongly connected random test matrix: a Hamiltonian cycle of positive
/// entries plus Bernoulli(density) extras with uniform(0,1] magnitudes.
PosMatrix random_irreducible(int n, double density, uint64_t seed);

struct TriggeredCriterion {
  std::string id;
  std::string description;
  double margin = 0.0;       // how far past the threshold the criterion fired
  CoordinateIdeal witness;   // verified nontrivial invariant ideal for T
};

/// Evaluate the finite-dimensional reducibility criteria for a semi-commuting
/// pair (T, K); every triggered criterion carries a verified nontrivial
/// T-invariant coordinate ideal.
std::vector<TriggeredCriterion> reducibility_detectors(
    const PosMatrix& t, const PosMatrix& k, Side side,
    const Tolerances& tol = Tolerances{});

struct ComparisonReport {
  double radius_a = 0.0;
  double radius_b = 0.0;
  double margin = 0.0;     // radius_a - radius_b
  bool equal_inputs = false;
};

/// Comparison check: for irreducible A and 0 <= B <= A with B != A the
/// spectral radius drops strictly; for B = A the radii agree.
ComparisonReport comparison_check(const PosMatrix& a, const PosMatrix& b,
                                  const Tolerances& tol = Tolerances{});

/// Deterministic generator for operators satisfying the peripheral structure
/// hypothesis: a weighted block permutation frame plus a strictly subdominant
/// in-block perturbation that preserves the frame exactly.
PosMatrix random_peripheral_structured(int n, uint64_t seed);

}  // namespace pflattice
