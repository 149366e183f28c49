#include "doctest.h"

#include <cmath>
#include <numbers>

#include "moebius/euclidean.hpp"

using namespace moebius;

namespace {

ExtendedPoint pt(std::vector<double> c) { return ExtendedPoint::finite(std::move(c)); }

}  // namespace

TEST_CASE("circle through three points") {
  const auto c = circle_through(pt({1.0, 0.0}), pt({0.0, 1.0}), pt({-1.0, 0.0}));
  CHECK_FALSE(c.is_line);
  CHECK(c.radius == doctest::Approx(1.0));
  CHECK(c.center[0] == doctest::Approx(0.0).epsilon(1e-14));
  const auto pts = c.sample(12);
  CHECK(circle_residual(euclidean_metric(2), pts) < 1e-12);
}

TEST_CASE("collinear triples give a line through infinity") {
  const auto c = circle_through(pt({0.0, 0.0}), pt({1.0, 1.0}), pt({2.0, 2.0}));
  CHECK(c.is_line);
  CHECK(c.at(0.0).is_infinity());
  CHECK(circle_residual(euclidean_metric(2), c.sample(9)) < 1e-12);
}

TEST_CASE("chordal metric is moebius equivalent") {
  const auto d = euclidean_metric(2);
  const auto ch = chordal_metric(2);
  const auto inf = ExtendedPoint::infinity();
  CHECK(ch(pt({0.0, 0.0}), inf) == doctest::Approx(2.0));
  const Quadruple q{pt({1.0, 0.0}), pt({0.0, 1.5}), pt({-1.0, 0.4}), inf};
  CHECK(cross_ratio(d, q).distance(cross_ratio(ch, q)) < 1e-12);
}

TEST_CASE("euclidean lines") {
  const EuclideanModel m(3);
  const std::vector<double> dir{0.0, 0.6, 0.8};
  const auto l = m.line(pt({1.0, 1.0, 1.0}), dir);
  CHECK(m.metric()(l(-2.0), l(1.5)) == doctest::Approx(3.5));
  CHECK_THROWS_AS(m.line(pt({0.0, 0.0, 0.0}), std::vector<double>{1.0, 1.0, 0.0}), MoebiusError);
}
