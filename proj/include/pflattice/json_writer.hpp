#pragma once

#include "pflattice/types.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pflattice {

// Deterministic JSON value tree for report serialization. Objects preserve
// insertion order and doubles print with 17 significant digits so that every
// value round-trips exactly and identical reports are byte-identical.
class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() : v_(nullptr) {}
  Json(std::nullptr_t) : v_(nullptr) {}
  Json(bool b) : v_(b) {}
  Json(int i) : v_(static_cast<int64_t>(i)) {}
  Json(int64_t i) : v_(i) {}
  Json(uint64_t u) : v_(u) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}

  static Json object() {
    Json j;
    j.v_ = Object{};
    return j;
  }

  static Json array() {
    Json j;
    j.v_ = Array{};
    return j;
  }

  Json& set(const std::string& key, Json value) {
    std::get<Object>(v_).emplace_back(key, std::move(value));
    return *this;
  }

  Json& push(Json value) {
    std::get<Array>(v_).push_back(std::move(value));
    return *this;
  }

  std::string dump() const {
    std::string out;
    write(out);
    return out;
  }

  static Json from_vector(const Vec& v) {
    Json a = array();
    for (int i = 0; i < v.size(); ++i) a.push(Json(v(i)));
    return a;
  }

  static Json from_matrix(const Matrix& m) {
    Json rows = array();
    for (int i = 0; i < m.rows(); ++i) {
      Json row = array();
      for (int j = 0; j < m.cols(); ++j) row.push(Json(m(i, j)));
      rows.push(std::move(row));
    }
    return rows;
  }

 private:
  void write(std::string& out) const {
    if (std::holds_alternative<std::nullptr_t>(v_)) {
      out += "null";
    } else if (std::holds_alternative<bool>(v_)) {
      out += std::get<bool>(v_) ? "true" : "false";
    } else if (std::holds_alternative<int64_t>(v_)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%" PRId64, std::get<int64_t>(v_));
      out += buf;
    } else if (std::holds_alternative<uint64_t>(v_)) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%" PRIu64, std::get<uint64_t>(v_));
      out += buf;
    } else if (std::holds_alternative<double>(v_)) {
      double d = std::get<double>(v_);
      if (!std::isfinite(d))
        throw InternalError("Json: non-finite number in report");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", d);
      out += buf;
    } else if (std::holds_alternative<std::string>(v_)) {
      write_string(out, std::get<std::string>(v_));
    } else if (std::holds_alternative<Array>(v_)) {
      out += '[';
      const auto& a = std::get<Array>(v_);
      for (size_t i = 0; i < a.size(); ++i) {
        if (i) out += ',';
        a[i].write(out);
      }
      out += ']';
    } else {
      out += '{';
      const auto& o = std::get<Object>(v_);
      for (size_t i = 0; i < o.size(); ++i) {
        if (i) out += ',';
        write_string(out, o[i].first);
        out += ':';
        o[i].second.write(out);
      }
      out += '}';
    }
  }

  static void write_string(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
      switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
          } else {
            out += c;
          }
      }
    }
    out += '"';
  }

  std::variant<std::nullptr_t, bool, int64_t, uint64_t, double, std::string,
               Array, Object>
      v_;
};

}  // namespace pflattice
