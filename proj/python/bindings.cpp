// Python bindings for the main operations: spectral analysis, Perron data,
// peripheral cycle structure, super-commutant LP certificates,
// triangularization and the theorem suite.

#include "pflattice/commutant.hpp"
#include "pflattice/lattice.hpp"
#include "pflattice/perron.hpp"
#include "pflattice/serialize.hpp"
#include "pflattice/spectral.hpp"
#include "pflattice/triangularize.hpp"
#include "pflattice/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pflattice;

namespace {

std::vector<std::vector<int>> ideal_lists(const std::vector<CoordinateIdeal>& links) {
  std::vector<std::vector<int>> out;
  for (const auto& link : links) out.push_back(link.indices());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral certificates for entrywise nonnegative operators";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<InvalidArgument>(m, "InvalidArgumentError");
  py::register_exception<PreconditionViolation>(m, "PreconditionViolationError");
  py::register_exception<QuasiNilpotentInput>(m, "QuasiNilpotentInputError");
  py::register_exception<BandSeparationFailure>(m, "BandSeparationError");
  py::register_exception<EigensolverFailure>(m, "EigensolverError");
  py::register_exception<HypothesisViolated>(m, "HypothesisViolatedError");
  py::register_exception<SolverFailure>(m, "SolverError");
  py::register_exception<DichotomyUndetected>(m, "DichotomyUndetectedError");
  py::register_exception<QuotientNotScalarZero>(m, "QuotientNotScalarZeroError");
  py::register_exception<ConditioningFailure>(m, "ConditioningError");

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("zero", &Tolerances::zero)
      .def_readwrite("peripheral_band", &Tolerances::peripheral_band)
      .def_readwrite("cluster", &Tolerances::cluster)
      .def_readwrite("lp_eps", &Tolerances::lp_eps)
      .def_readwrite("commuting", &Tolerances::commuting);

  py::class_<PosMatrix>(m, "PosMatrix")
      .def(py::init([](const Matrix& entries) { return PosMatrix(entries); }),
           py::arg("entries"))
      .def_property_readonly("n", &PosMatrix::n)
      .def_property_readonly("matrix", [](const PosMatrix& a) { return a.mat(); });

  py::enum_<Side>(m, "Side")
      .value("RIGHT", Side::Right)
      .value("LEFT", Side::Left);

  py::class_<SpectrumReport>(m, "SpectrumReport")
      .def_readonly("eigenvalues", &SpectrumReport::eigenvalues)
      .def_readonly("radius", &SpectrumReport::radius)
      .def_readonly("peripheral", &SpectrumReport::peripheral)
      .def_readonly("peripheral_semisimple", &SpectrumReport::peripheral_semisimple);

  py::class_<LocalRadius>(m, "LocalRadius")
      .def_readonly("exact", &LocalRadius::exact)
      .def_readonly("empirical", &LocalRadius::empirical);

  py::enum_<DichotomyKind>(m, "DichotomyKind")
      .value("PROJECTION_LIMIT", DichotomyKind::ProjectionLimit)
      .value("NILPOTENT_LIMIT", DichotomyKind::NilpotentLimit);

  py::class_<DichotomyResult>(m, "DichotomyResult")
      .def_readonly("kind", &DichotomyResult::kind)
      .def_readonly("limit", &DichotomyResult::limit)
      .def_readonly("subsequence_period", &DichotomyResult::subsequence_period)
      .def_readonly("scaling_exponent", &DichotomyResult::scaling_exponent)
      .def_readonly("verified_power", &DichotomyResult::verified_power);

  py::class_<IrreducibilityCertificate>(m, "IrreducibilityCertificate")
      .def_readonly("irreducible", &IrreducibilityCertificate::irreducible)
      .def_property_readonly("witness", [](const IrreducibilityCertificate& c) {
        return c.witness ? py::cast(c.witness->indices()) : py::none().cast<py::object>();
      });

  py::class_<PerronPair>(m, "PerronPair")
      .def_readonly("radius", &PerronPair::radius)
      .def_readonly("x0", &PerronPair::x0)
      .def_readonly("x0star", &PerronPair::x0star);

  py::class_<PeripheralStructure>(m, "PeripheralStructure")
      .def_readonly("radius", &PeripheralStructure::radius)
      .def_readonly("projection", &PeripheralStructure::projection)
      .def_readonly("rank", &PeripheralStructure::rank)
      .def_readonly("vectors", &PeripheralStructure::vectors)
      .def_readonly("functionals", &PeripheralStructure::functionals)
      .def_readonly("permutation", &PeripheralStructure::permutation)
      .def_readonly("period", &PeripheralStructure::period)
      .def_readonly("x0", &PeripheralStructure::x0)
      .def_readonly("x0star", &PeripheralStructure::x0star)
      .def_readonly("verified_power", &PeripheralStructure::verified_power);

  py::class_<CommonEigenpair>(m, "CommonEigenpair")
      .def_readonly("x0", &CommonEigenpair::x0)
      .def_readonly("x0star", &CommonEigenpair::x0star)
      .def_readonly("lambda_t", &CommonEigenpair::lambda_t)
      .def_readonly("mu_k", &CommonEigenpair::mu_k);

  py::class_<CommutingEigenvalue>(m, "CommutingEigenvalue")
      .def_property_readonly("lambda_", [](const CommutingEigenvalue& c) { return c.lambda; })
      .def_readonly("x", &CommutingEigenvalue::x)
      .def_readonly("xstar", &CommutingEigenvalue::xstar);

  py::class_<CommutantRelation>(m, "CommutantRelation")
      .def_readonly("side", &CommutantRelation::side)
      .def_readonly("n", &CommutantRelation::n)
      .def_property_readonly("edges", [](const CommutantRelation& rel) {
        std::vector<std::vector<bool>> out = rel.edges;
        return out;
      });

  py::class_<GapResult>(m, "GapResult")
      .def_readonly("gap_right", &GapResult::gap_right)
      .def_readonly("gap_left", &GapResult::gap_left);

  py::class_<SampleResult>(m, "SampleResult")
      .def_readonly("degenerate", &SampleResult::degenerate)
      .def_property_readonly("samples", [](const SampleResult& s) {
        std::vector<Matrix> out;
        for (const auto& a : s.samples) out.push_back(a.mat());
        return out;
      });

  py::class_<IdealChain>(m, "IdealChain")
      .def_property_readonly("links",
                             [](const IdealChain& c) { return ideal_lists(c.links); })
      .def_readonly("maximal", &IdealChain::maximal);

  py::class_<NilpotencyCertificate>(m, "NilpotencyCertificate")
      .def_readonly("commutator", &NilpotencyCertificate::commutator)
      .def_readonly("chain", &NilpotencyCertificate::chain)
      .def_readonly("permuted_form", &NilpotencyCertificate::permuted_form)
      .def_readonly("radius", &NilpotencyCertificate::radius)
      .def_readonly("index", &NilpotencyCertificate::index);

  py::class_<TriggeredCriterion>(m, "TriggeredCriterion")
      .def_readonly("id", &TriggeredCriterion::id)
      .def_readonly("description", &TriggeredCriterion::description)
      .def_readonly("margin", &TriggeredCriterion::margin)
      .def_property_readonly("witness", [](const TriggeredCriterion& c) {
        return c.witness.indices();
      });

  py::class_<ComparisonReport>(m, "ComparisonReport")
      .def_readonly("radius_a", &ComparisonReport::radius_a)
      .def_readonly("radius_b", &ComparisonReport::radius_b)
      .def_readonly("margin", &ComparisonReport::margin)
      .def_readonly("equal_inputs", &ComparisonReport::equal_inputs);

  // lattice
  m.def("support_of",
        [](const Vec& v, const Tolerances& tol) { return support_of(v, tol).indices(); },
        py::arg("v"), py::arg("tol") = Tolerances{});
  m.def("is_invariant_ideal",
        [](const PosMatrix& a, const std::vector<int>& s, const Tolerances& tol) {
          return is_invariant_ideal(a, CoordinateIdeal::of(a.n(), s), tol);
        },
        py::arg("a"), py::arg("ideal"), py::arg("tol") = Tolerances{});
  m.def("is_quasi_interior",
        [](const Vec& v, const Tolerances& tol) {
          return is_quasi_interior(v, tol).quasi_interior;
        },
        py::arg("v"), py::arg("tol") = Tolerances{});

  // spectral
  m.def("spectrum", py::overload_cast<const PosMatrix&, const Tolerances&>(&spectrum),
        py::arg("a"), py::arg("tol") = Tolerances{});
  m.def("spectral_radius",
        py::overload_cast<const PosMatrix&, const Tolerances&>(&spectral_radius),
        py::arg("a"), py::arg("tol") = Tolerances{});
  m.def("peripheral_projection",
        py::overload_cast<const PosMatrix&, const Tolerances&>(&peripheral_projection),
        py::arg("a"), py::arg("tol") = Tolerances{});
  m.def("local_spectral_radius",
        py::overload_cast<const PosMatrix&, const Vec&, const Tolerances&>(
            &local_spectral_radius),
        py::arg("a"), py::arg("x"), py::arg("tol") = Tolerances{});
  m.def("dual_local_spectral_radius",
        py::overload_cast<const PosMatrix&, const Vec&, const Tolerances&>(
            &dual_local_spectral_radius),
        py::arg("a"), py::arg("xstar"), py::arg("tol") = Tolerances{});
  m.def("power_dichotomy", &power_dichotomy, py::arg("a"),
        py::arg("tol") = Tolerances{});

  // perron
  m.def("is_ideal_irreducible",
        [](const std::vector<PosMatrix>& matrices, const Tolerances& tol) {
          return is_ideal_irreducible(matrices, tol);
        },
        py::arg("matrices"), py::arg("tol") = Tolerances{});
  m.def("perron_pair", &perron_pair, py::arg("a"), py::arg("tol") = Tolerances{});
  m.def("peripheral_cycle_structure", &peripheral_cycle_structure, py::arg("k"),
        py::arg("tol") = Tolerances{});
  m.def("strongly_expanding_sum", &strongly_expanding_sum, py::arg("t"),
        py::arg("tol") = Tolerances{});
  m.def("common_peripheral_eigenpair", &common_peripheral_eigenpair, py::arg("t"),
        py::arg("k"), py::arg("tol") = Tolerances{});
  m.def("commuting_eigenvalue", &commuting_eigenvalue, py::arg("s"),
        py::arg("structure"), py::arg("tol") = Tolerances{});

  // commutant
  m.def("semi_commutant_feasible",
        [](const PosMatrix& k, Side side, int i, int j, const Tolerances& tol) {
          const auto res = semi_commutant_feasible(k, side, i, j, tol);
          return py::make_tuple(res.feasible,
                                res.witness ? py::cast(res.witness->mat())
                                            : py::none().cast<py::object>());
        },
        py::arg("k"), py::arg("side"), py::arg("i"), py::arg("j"),
        py::arg("tol") = Tolerances{});
  m.def("super_commutant_relation", &super_commutant_relation, py::arg("k"),
        py::arg("side"), py::arg("tol") = Tolerances{},
        py::arg("keep_witnesses") = false);
  m.def("is_super_commutant_irreducible", &is_super_commutant_irreducible,
        py::arg("k"), py::arg("side"), py::arg("tol") = Tolerances{});
  m.def("commutant_equality_gap", &commutant_equality_gap, py::arg("k"),
        py::arg("tol") = Tolerances{});
  m.def("commutant_equality_gap_exact", &commutant_equality_gap_exact, py::arg("k"));
  m.def("sample_semi_commuting", &sample_semi_commuting, py::arg("k"),
        py::arg("side"), py::arg("seed"), py::arg("count"),
        py::arg("tol") = Tolerances{});

  // triangularize
  m.def("invariant_ideal_chain", &invariant_ideal_chain, py::arg("t"),
        py::arg("tol") = Tolerances{});
  m.def("commutator_nilpotency", &commutator_nilpotency, py::arg("t"), py::arg("k"),
        py::arg("tol") = Tolerances{});

  // verify
  m.def("random_irreducible", &random_irreducible, py::arg("n"), py::arg("density"),
        py::arg("seed"));
  m.def("random_peripheral_structured", &random_peripheral_structured, py::arg("n"),
        py::arg("seed"));
  m.def("reducibility_detectors", &reducibility_detectors, py::arg("t"), py::arg("k"),
        py::arg("side"), py::arg("tol") = Tolerances{});
  m.def("comparison_check", &comparison_check, py::arg("a"), py::arg("b"),
        py::arg("tol") = Tolerances{});
  m.def("suite_property_names", &suite_property_names);
  m.def(
      "run_theorem_suite",
      [](const std::vector<int>& n_values, int trials, uint64_t seed,
         const std::vector<std::string>& properties, const Tolerances& tol) {
        SuiteConfig config;
        config.n_values = n_values;
        config.trials = trials;
        config.seed = seed;
        config.properties = properties;
        config.tol = tol;
        const SuiteReport report = run_theorem_suite(config);
        return py::make_tuple(report.all_passed(),
                              json_suite_report(report).dump());
      },
      py::arg("n_values"), py::arg("trials"), py::arg("seed"),
      py::arg("properties") = std::vector<std::string>{},
      py::arg("tol") = Tolerances{},
      "Run the randomized theorem suite; returns (all_passed, report_json).");
}
