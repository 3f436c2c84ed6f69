#pragma once

#include "pflattice/commutant.hpp"
#include "pflattice/json_writer.hpp"
#include "pflattice/perron.hpp"
#include "pflattice/spectral.hpp"
#include "pflattice/triangularize.hpp"
#include "pflattice/verify.hpp"

namespace pflattice {

// JSON views of the report payloads. Coordinates and permutations serialize
// 1-based to match the file formats; matrices use the matrix file schema.

Json json_matrix(const Matrix& m);
Json json_ideal(const CoordinateIdeal& s);
Json json_tolerances(const Tolerances& tol);
Json json_spectrum(const SpectrumReport& rep);
Json json_peripheral_structure(const PeripheralStructure& st);
Json json_certificate(const IrreducibilityCertificate& cert);
Json json_relation(const CommutantRelation& rel);
Json json_gap(const GapResult& gap);
Json json_samples(const SampleResult& s);
Json json_nilpotency(const NilpotencyCertificate& cert);
Json json_suite_report(const SuiteReport& report);

}  // namespace pflattice
