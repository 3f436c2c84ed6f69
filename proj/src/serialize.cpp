#include "pflattice/serialize.hpp"

namespace pflattice {

namespace {

Json json_complex_list(const std::vector<std::complex<double>>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) {
    Json c = Json::object();
    c.set("re", Json(v.real()));
    c.set("im", Json(v.imag()));
    arr.push(std::move(c));
  }
  return arr;
}

Json json_vector_list(const std::vector<Vec>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) arr.push(Json::from_vector(v));
  return arr;
}

}  // namespace

Json json_matrix(const Matrix& m) {
  Json j = Json::object();
  j.set("n", Json(static_cast<int64_t>(m.rows())));
  j.set("rows", Json::from_matrix(m));
  return j;
}

Json json_ideal(const CoordinateIdeal& s) {
  Json arr = Json::array();
  for (int i : s.indices()) arr.push(Json(static_cast<int64_t>(i + 1)));
  return arr;
}

Json json_tolerances(const Tolerances& tol) {
  Json j = Json::object();
  j.set("zero", Json(tol.zero));
  j.set("peripheral_band", Json(tol.peripheral_band));
  j.set("cluster", Json(tol.cluster));
  j.set("lp_eps", Json(tol.lp_eps));
  j.set("commuting", Json(tol.commuting));
  return j;
}

Json json_spectrum(const SpectrumReport& rep) {
  Json j = Json::object();
  j.set("radius", Json(rep.radius));
  j.set("eigenvalues", json_complex_list(rep.eigenvalues));
  j.set("peripheral", json_complex_list(rep.peripheral));
  j.set("peripheral_semisimple", Json(rep.peripheral_semisimple));
  return j;
}

Json json_peripheral_structure(const PeripheralStructure& st) {
  Json j = Json::object();
  j.set("radius", Json(st.radius));
  j.set("rank", Json(static_cast<int64_t>(st.rank)));
  j.set("period", Json(static_cast<int64_t>(st.period)));
  Json perm = Json::array();
  for (int p : st.permutation) perm.push(Json(static_cast<int64_t>(p + 1)));
  j.set("permutation", std::move(perm));
  j.set("projection", Json::from_matrix(st.projection));
  j.set("vectors", json_vector_list(st.vectors));
  j.set("functionals", json_vector_list(st.functionals));
  j.set("x0", Json::from_vector(st.x0));
  j.set("x0star", Json::from_vector(st.x0star));
  j.set("verified_power", Json(static_cast<int64_t>(st.verified_power)));
  return j;
}

Json json_certificate(const IrreducibilityCertificate& cert) {
  Json j = Json::object();
  j.set("irreducible", Json(cert.irreducible));
  j.set("witness", cert.witness ? json_ideal(*cert.witness) : Json(nullptr));
  return j;
}

Json json_relation(const CommutantRelation& rel) {
  Json j = Json::object();
  j.set("side", Json(side_name(rel.side)));
  j.set("n", Json(static_cast<int64_t>(rel.n)));
  Json edges = Json::array();
  for (int i = 0; i < rel.n; ++i) {
    Json row = Json::array();
    for (int q = 0; q < rel.n; ++q) row.push(Json(rel.edge(i, q)));
    edges.push(std::move(row));
  }
  j.set("edges", std::move(edges));
  return j;
}

Json json_gap(const GapResult& gap) {
  Json j = Json::object();
  j.set("gap_right", Json(gap.gap_right));
  j.set("gap_left", Json(gap.gap_left));
  j.set("witness_right",
        gap.witness_right ? json_matrix(gap.witness_right->mat()) : Json(nullptr));
  j.set("witness_left",
        gap.witness_left ? json_matrix(gap.witness_left->mat()) : Json(nullptr));
  return j;
}

Json json_samples(const SampleResult& s) {
  Json j = Json::object();
  j.set("degenerate", Json(s.degenerate));
  Json arr = Json::array();
  for (const auto& m : s.samples) arr.push(json_matrix(m.mat()));
  j.set("samples", std::move(arr));
  return j;
}

Json json_nilpotency(const NilpotencyCertificate& cert) {
  Json j = Json::object();
  j.set("commutator", json_matrix(cert.commutator));
  j.set("radius", Json(cert.radius));
  j.set("index", Json(static_cast<int64_t>(cert.index)));
  Json chain = Json::array();
  for (const auto& link : cert.chain.links) chain.push(json_ideal(link));
  j.set("chain", std::move(chain));
  j.set("maximal", Json(cert.chain.maximal));
  Json perm = Json::array();
  for (int p : cert.permuted_form) perm.push(Json(static_cast<int64_t>(p + 1)));
  j.set("permuted_form", std::move(perm));
  return j;
}

Json json_suite_report(const SuiteReport& report) {
  Json j = Json::object();
  j.set("seed", Json(static_cast<uint64_t>(report.seed)));
  Json ns = Json::array();
  for (int n : report.n_values) ns.push(Json(static_cast<int64_t>(n)));
  j.set("n", std::move(ns));
  j.set("trials", Json(static_cast<int64_t>(report.trials)));
  j.set("tolerances", json_tolerances(report.tol));
  Json props = Json::array();
  for (const auto& p : report.properties) {
    Json pj = Json::object();
    pj.set("name", Json(p.name));
    pj.set("pass", Json(static_cast<int64_t>(p.pass)));
    pj.set("fail", Json(static_cast<int64_t>(p.fail)));
    pj.set("skipped", Json(static_cast<int64_t>(p.skipped)));
    pj.set("worst_margin", p.worst_margin ? Json(*p.worst_margin) : Json(nullptr));
    if (!p.skip_reason.empty()) pj.set("skip_reason", Json(p.skip_reason));
    if (p.counterexample) {
      Json ce = Json::object();
      ce.set("trial", Json(static_cast<int64_t>(p.counterexample->trial)));
      ce.set("seed", Json(static_cast<uint64_t>(p.counterexample->trial_seed)));
      ce.set("detail", Json(p.counterexample->detail));
      Json ms = Json::array();
      for (const auto& [name, m] : p.counterexample->matrices) {
        Json one = Json::object();
        one.set("name", Json(name));
        one.set("matrix", json_matrix(m));
        ms.push(std::move(one));
      }
      ce.set("matrices", std::move(ms));
      pj.set("counterexample", std::move(ce));
    } else {
      pj.set("counterexample", Json(nullptr));
    }
    props.push(std::move(pj));
  }
  j.set("properties", std::move(props));
  Json totals = Json::object();
  totals.set("pass", Json(static_cast<int64_t>(report.total_pass)));
  totals.set("fail", Json(static_cast<int64_t>(report.total_fail)));
  totals.set("skipped", Json(static_cast<int64_t>(report.total_skipped)));
  j.set("totals", std::move(totals));
  j.set("wall_time_ms", Json(report.wall_ms));
  return j;
}

}  // namespace pflattice
