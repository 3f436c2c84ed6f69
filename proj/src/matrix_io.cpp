#include "pflattice/matrix_io.hpp"

#include "pflattice/json_writer.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace pflattice {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
  if (!out) throw ParseError("write failed: " + path);
}

PosMatrix parse_matrix_json(const std::string& text, const Tolerances& tol) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("rows"))
    throw ParseError("matrix JSON: expected object with \"n\" and \"rows\"");
  if (!j["n"].is_number_integer())
    throw ParseError("matrix JSON: \"n\" must be an integer");
  const auto n = j["n"].get<int64_t>();
  if (n < 2) throw ParseError("matrix JSON: n must be >= 2");
  const auto& rows = j["rows"];
  if (!rows.is_array() || rows.size() != static_cast<size_t>(n))
    throw ParseError("matrix JSON: \"rows\" must hold n rows");
  std::vector<std::vector<double>> data;
  data.reserve(static_cast<size_t>(n));
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != static_cast<size_t>(n))
      throw ParseError("matrix JSON: ragged rows");
    std::vector<double> r;
    r.reserve(static_cast<size_t>(n));
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("matrix JSON: non-numeric entry");
      r.push_back(v.get<double>());
    }
    data.push_back(std::move(r));
  }
  try {
    return PosMatrix::from_rows(data, tol);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("matrix JSON: ") + e.what());
  }
}

PosMatrix parse_matrix_csv(const std::string& text, const Tolerances& tol) {
  std::vector<std::vector<double>> data;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // skip trailing blank lines only
    if (line.find_first_not_of(" \t") == std::string::npos) {
      if (in.peek() == EOF) break;
      throw ParseError("matrix CSV: blank line");
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw ParseError("matrix CSV: non-numeric cell '" + cell + "'");
      }
      while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
        ++pos;
      if (pos != cell.size())
        throw ParseError("matrix CSV: non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    data.push_back(std::move(row));
  }
  if (data.empty()) throw ParseError("matrix CSV: empty file");
  const size_t n = data.size();
  for (const auto& row : data)
    if (row.size() != n) throw ParseError("matrix CSV: ragged rows");
  try {
    return PosMatrix::from_rows(data, tol);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("matrix CSV: ") + e.what());
  }
}

PosMatrix load_matrix(const std::string& path, const Tolerances& tol) {
  const std::string text = read_file(path);
  const size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ParseError("empty matrix file: " + path);
  if (text[first] == '{') return parse_matrix_json(text, tol);
  return parse_matrix_csv(text, tol);
}

std::string matrix_to_json(const Matrix& m) {
  Json j = Json::object();
  j.set("n", Json(static_cast<int64_t>(m.rows())));
  j.set("rows", Json::from_matrix(m));
  return j.dump();
}

void save_matrix(const std::string& path, const Matrix& m) {
  write_file(path, matrix_to_json(m) + "\n");
}

}  // namespace pflattice
