// Command-line front door: file-based matrix I/O, analysis commands, JSON
// reports and suite execution.
//
// Exit codes
//   0  success (irreducible / all properties pass, where applicable)
//   1  I/O, parse or configuration error
//   2  hypothesis violation (analyze)
//   3  reducible (irreducible)
//   4  LP solver failure (commutant)
//   5  precondition violation (triangularize)
//   6  suite property failure

#include "pflattice/lattice.hpp"
#include "pflattice/matrix_io.hpp"
#include "pflattice/serialize.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using namespace pflattice;

void emit(const Json& report, const std::string& out_path) {
  const std::string text = report.dump() + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

struct TolOptions {
  double zero = -1.0;
  double band = -1.0;
  double cluster = -1.0;
  double lp = -1.0;

  Tolerances build() const {
    Tolerances tol = Tolerances::from_env();
    if (zero > 0.0) tol.zero = zero;
    if (band > 0.0) tol.peripheral_band = band;
    if (cluster > 0.0) tol.cluster = cluster;
    if (lp > 0.0) tol.lp_eps = lp;
    tol.validate();
    return tol;
  }
};

void add_tol_options(CLI::App* cmd, TolOptions& opts) {
  cmd->add_option("--tol", opts.zero, "Zero threshold (default 1e-9)");
  cmd->add_option("--tol-band", opts.band, "Peripheral band (default 1e-6)");
  cmd->add_option("--tol-cluster", opts.cluster, "Cluster threshold (default 1e-8)");
  cmd->add_option("--tol-lp", opts.lp, "LP feasibility slack (default 1e-9)");
}

std::vector<int> parse_dimensions(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    const auto dots = piece.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(piece.substr(0, dots));
      const int hi = std::stoi(piece.substr(dots + 2));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(std::stoi(piece));
    }
  }
  return out;
}

int run_analyze(const std::string& path, const TolOptions& topts,
                const std::string& out_path) {
  const Tolerances tol = topts.build();
  const PosMatrix k = load_matrix(path, tol);
  Json report = Json::object();
  report.set("command", Json("analyze"));
  report.set("input", Json(path));
  report.set("n", Json(static_cast<int64_t>(k.n())));
  report.set("tolerances", json_tolerances(tol));
  report.set("spectrum", json_spectrum(spectrum(k, tol)));
  int code = 0;
  try {
    report.set("peripheral_structure",
               json_peripheral_structure(peripheral_cycle_structure(k, tol)));
    report.set("hypothesis_violation", Json(nullptr));
  } catch (const QuasiNilpotentInput& e) {
    report.set("peripheral_structure", Json(nullptr));
    report.set("hypothesis_violation", Json(e.what()));
    code = 2;
  } catch (const HypothesisViolated& e) {
    report.set("peripheral_structure", Json(nullptr));
    report.set("hypothesis_violation", Json(e.what()));
    code = 2;
  } catch (const BandSeparationFailure& e) {
    report.set("peripheral_structure", Json(nullptr));
    report.set("hypothesis_violation", Json(e.what()));
    code = 2;
  }
  emit(report, out_path);
  if (code != 0) std::cerr << "analyze: hypothesis violation\n";
  return code;
}

int run_irreducible(const std::vector<std::string>& paths, bool plain,
                    bool super_right, bool super_left, const TolOptions& topts,
                    const std::string& out_path) {
  const Tolerances tol = topts.build();
  const int modes = (plain ? 1 : 0) + (super_right ? 1 : 0) + (super_left ? 1 : 0);
  if (modes > 1)
    throw InvalidArgument("irreducible: choose one of --plain, --super-right, --super-left");
  std::string mode = "plain";
  if (super_right) mode = "super-right";
  if (super_left) mode = "super-left";
  if (mode != "plain" && paths.size() != 1)
    throw InvalidArgument("irreducible: super modes accept exactly one matrix");

  IrreducibilityCertificate cert;
  if (mode == "plain") {
    std::vector<PosMatrix> matrices;
    for (const auto& p : paths) matrices.push_back(load_matrix(p, tol));
    cert = is_ideal_irreducible(matrices, tol);
  } else {
    const PosMatrix k = load_matrix(paths.front(), tol);
    cert = is_super_commutant_irreducible(
        k, mode == "super-right" ? Side::Right : Side::Left, tol);
  }

  Json report = Json::object();
  report.set("command", Json("irreducible"));
  report.set("mode", Json(mode));
  Json inputs = Json::array();
  for (const auto& p : paths) inputs.push(Json(p));
  report.set("inputs", std::move(inputs));
  report.set("irreducible", Json(cert.irreducible));
  report.set("witness", cert.witness ? json_ideal(*cert.witness) : Json(nullptr));
  emit(report, out_path);
  return cert.irreducible ? 0 : 3;
}

int run_commutant(const std::string& path, bool want_gap, bool want_relation,
                  int sample_count, uint64_t seed, const std::string& side_text,
                  const TolOptions& topts, const std::string& out_path) {
  const Tolerances tol = topts.build();
  const int modes = (want_gap ? 1 : 0) + (want_relation ? 1 : 0) +
                    (sample_count > 0 ? 1 : 0);
  if (modes != 1)
    throw InvalidArgument("commutant: choose exactly one of --gap, --relation, --sample");
  const PosMatrix k = load_matrix(path, tol);

  Json report = Json::object();
  report.set("command", Json("commutant"));
  report.set("input", Json(path));
  if (want_gap) {
    const GapResult gap = commutant_equality_gap(k, tol);
    report.set("gap_right", Json(gap.gap_right));
    report.set("gap_left", Json(gap.gap_left));
  } else if (want_relation) {
    report.set("right", json_relation(super_commutant_relation(k, Side::Right, tol)));
    report.set("left", json_relation(super_commutant_relation(k, Side::Left, tol)));
  } else {
    const Side side = side_text == "left" ? Side::Left : Side::Right;
    report.set("side", Json(side_name(side)));
    report.set("seed", Json(seed));
    const SampleResult samples = sample_semi_commuting(k, side, seed, sample_count, tol);
    report.set("degenerate", Json(samples.degenerate));
    Json arr = Json::array();
    for (const auto& m : samples.samples) arr.push(json_matrix(m.mat()));
    report.set("samples", std::move(arr));
  }
  emit(report, out_path);
  return 0;
}

int run_triangularize(const std::string& t_path, const std::string& k_path,
                      const TolOptions& topts, const std::string& out_path) {
  const Tolerances tol = topts.build();
  const PosMatrix t = load_matrix(t_path, tol);
  const PosMatrix k = load_matrix(k_path, tol);
  const NilpotencyCertificate cert = commutator_nilpotency(t, k, tol);
  Json report = json_nilpotency(cert);
  Json wrapped = Json::object();
  wrapped.set("command", Json("triangularize"));
  wrapped.set("inputs", Json::array().push(Json(t_path)).push(Json(k_path)));
  wrapped.set("certificate", std::move(report));
  emit(wrapped, out_path);
  return 0;
}

int run_suite(const std::string& n_text, int trials, uint64_t seed,
              const std::string& only, const TolOptions& topts,
              const std::string& out_path) {
  SuiteConfig config;
  config.tol = topts.build();
  if (!n_text.empty()) config.n_values = parse_dimensions(n_text);
  config.trials = trials;
  config.seed = seed;
  if (!only.empty()) {
    std::istringstream in(only);
    std::string piece;
    while (std::getline(in, piece, ',')) config.properties.push_back(piece);
  }
  config.validate();
  const SuiteReport report = run_theorem_suite(config);
  emit(json_suite_report(report), out_path);
  return report.all_passed() ? 0 : 6;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral certificates for entrywise nonnegative operators"};
  app.require_subcommand(1);

  TolOptions topts;
  std::string out_path;

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Spectrum and peripheral cycle structure of one matrix");
  std::string analyze_input;
  analyze->add_option("matrix", analyze_input, "Matrix file (JSON or CSV)")->required();
  add_tol_options(analyze, topts);
  analyze->add_option("--report", out_path, "Write the JSON report to a file");

  // irreducible
  auto* irreducible = app.add_subcommand(
      "irreducible", "Ideal irreducibility certificates");
  std::vector<std::string> irr_inputs;
  bool plain = false, super_right = false, super_left = false;
  irreducible->add_option("matrices", irr_inputs, "Matrix files")->required();
  irreducible->add_flag("--plain", plain, "Collection irreducibility (default)");
  irreducible->add_flag("--super-right", super_right, "Super right-commutant");
  irreducible->add_flag("--super-left", super_left, "Super left-commutant");
  add_tol_options(irreducible, topts);
  irreducible->add_option("--report", out_path, "Write the JSON report to a file");

  // commutant
  auto* commutant = app.add_subcommand(
      "commutant", "Super-commutant gaps, relation and cone samples");
  std::string commutant_input, sample_side = "right";
  bool want_gap = false, want_relation = false;
  int sample_count = 0;
  uint64_t sample_seed = 0;
  commutant->add_option("matrix", commutant_input, "Matrix file")->required();
  commutant->add_flag("--gap", want_gap, "Commutant equality gaps");
  commutant->add_flag("--relation", want_relation, "Elementwise reachability relation");
  commutant->add_option("--sample", sample_count, "Sample N cone members");
  commutant->add_option("--seed", sample_seed, "Sampling seed");
  commutant->add_option("--side", sample_side, "Sampling side: right or left")
      ->check(CLI::IsMember({"right", "left"}));
  add_tol_options(commutant, topts);
  commutant->add_option("--report", out_path, "Write the JSON report to a file");

  // triangularize
  auto* triangularize = app.add_subcommand(
      "triangularize", "Commutator nilpotency certificate for a pair");
  std::string t_path, k_path;
  triangularize->add_option("T", t_path, "Left operator file")->required();
  triangularize->add_option("K", k_path, "Right operator file")->required();
  add_tol_options(triangularize, topts);
  triangularize->add_option("--report", out_path, "Write the JSON report to a file");

  // suite
  auto* suite = app.add_subcommand("suite", "Run the randomized theorem suite");
  std::string n_text, only;
  int trials = 50;
  uint64_t suite_seed = 0;
  suite->add_option("--n", n_text, "Dimensions, e.g. 4 or 3,4,5 or 3..8");
  suite->add_option("--trials", trials, "Trials per property");
  suite->add_option("--seed", suite_seed, "Suite seed");
  suite->add_option("--only", only, "Comma-separated property names");
  add_tol_options(suite, topts);
  suite->add_option("--report", out_path, "Write the JSON report to a file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return run_analyze(analyze_input, topts, out_path);
    if (irreducible->parsed())
      return run_irreducible(irr_inputs, plain, super_right, super_left, topts,
                             out_path);
    if (commutant->parsed())
      return run_commutant(commutant_input, want_gap, want_relation, sample_count,
                           sample_seed, sample_side, topts, out_path);
    if (triangularize->parsed())
      return run_triangularize(t_path, k_path, topts, out_path);
    if (suite->parsed())
      return run_suite(n_text, trials, suite_seed, only, topts, out_path);
  } catch (const SolverFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return commutant->parsed() ? 4 : 1;
  } catch (const PreconditionViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return triangularize->parsed() ? 5 : 1;
  } catch (const pflattice::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
