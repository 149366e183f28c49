#include "doctest.h"

#include <sstream>

#include "moebius/io.hpp"

using namespace moebius;

TEST_CASE("point json") {
  const auto p = ExtendedPoint::finite({0.1, -2.5, 3.0});
  CHECK(point_from_json(point_to_json(p)) == p);
  CHECK(point_from_json(point_to_json(ExtendedPoint::infinity())).is_infinity());
  CHECK(point_from_json(nlohmann::json::parse("[1, 2]")) == ExtendedPoint::finite({1.0, 2.0}));
  CHECK(point_from_json(nlohmann::json("inf")).is_infinity());
  CHECK_THROWS_AS(point_from_json(nlohmann::json::parse(R"({"kind":"bogus"})")), MoebiusError);
}

TEST_CASE("quadruple json") {
  const Quadruple q{ExtendedPoint::finite({0.0}), ExtendedPoint::finite({1.0}),
                    ExtendedPoint::infinity(), ExtendedPoint::finite({2.0})};
  CHECK(quadruple_from_json(quadruple_to_json(q)) == q);
  CHECK(quadruple_from_json(nlohmann::json{{"points", quadruple_to_json(q)}}) == q);
  CHECK_THROWS_AS(quadruple_from_json(nlohmann::json::parse("[[0],[1]]")), MoebiusError);
}

TEST_CASE("csv") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  std::ostringstream out;
  write_curve_csv(out, {"t", "x", "y"}, {0.0, 1.0},
                  {ExtendedPoint::infinity(), ExtendedPoint::finite({0.5, -1.0})});
  CHECK(out.str() == "t,x,y\n0,inf,inf\n1,0.5,-1\n");
}
