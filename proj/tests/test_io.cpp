#include "pflattice/json_writer.hpp"
#include "pflattice/matrix_io.hpp"

#include <doctest.h>
#include <json.hpp>

using namespace pflattice;

TEST_CASE("matrix JSON parsing accepts the documented format") {
  const auto m = parse_matrix_json(R"({"n": 2, "rows": [[0, 1], [2.5, 0]]})");
  CHECK(m.n() == 2);
  CHECK(m(1, 0) == 2.5);
}

TEST_CASE("matrix JSON parsing rejects malformed inputs") {
  CHECK_THROWS_AS(parse_matrix_json(R"({"rows": [[1]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"n": 2, "rows": [[1, 2], [3]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"n": 2, "rows": [[1, 2]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json(R"({"n": 2, "rows": [[1, -2], [3, 4]]})"), ParseError);
  CHECK_THROWS_AS(parse_matrix_json("[1, 2]"), ParseError);
}

TEST_CASE("matrix CSV parsing and ragged rejection") {
  const auto m = parse_matrix_csv("0,1\n2,3\n");
  CHECK(m.n() == 2);
  CHECK(m(1, 1) == 3.0);
  CHECK_THROWS_AS(parse_matrix_csv("0,1\n2\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix_csv("0,x\n2,3\n"), ParseError);
}

TEST_CASE("matrix serialization round-trips losslessly") {
  Matrix m(2, 2);
  m << 0.1, 1.0 / 3.0, 2.5e-13, 7.0;
  const std::string text = matrix_to_json(m);
  const auto back = parse_matrix_json(text);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(back(i, j) == m(i, j));
}

TEST_CASE("the json writer is deterministic and orders keys by insertion") {
  Json a = Json::object();
  a.set("b", Json(1.5));
  a.set("a", Json("x\"y"));
  a.set("list", Json::array().push(Json(true)).push(Json(nullptr)));
  CHECK(a.dump() == "{\"b\":1.5,\"a\":\"x\\\"y\",\"list\":[true,null]}");
  // doubles print with 17 significant digits and round-trip
  Json d = Json(0.1);
  const double parsed = nlohmann::json::parse(d.dump()).get<double>();
  CHECK(parsed == 0.1);
}
