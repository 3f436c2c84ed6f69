#pragma once

#include "pflattice/types.hpp"

#include <string>

namespace pflattice {

/// Parse a matrix file. JSON format: {"n": <int>, "rows": [[...], ...]};
/// CSV format: n lines of n comma-separated values. The format is chosen by
/// content (leading '{' means JSON). Ragged rows are rejected.
PosMatrix load_matrix(const std::string& path,
                      const Tolerances& tol = Tolerances{});

PosMatrix parse_matrix_json(const std::string& text,
                            const Tolerances& tol = Tolerances{});

PosMatrix parse_matrix_csv(const std::string& text,
                           const Tolerances& tol = Tolerances{});

/// Serialize in the JSON matrix file format (17 significant digits).
std::string matrix_to_json(const Matrix& m);

void save_matrix(const std::string& path, const Matrix& m);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace pflattice
