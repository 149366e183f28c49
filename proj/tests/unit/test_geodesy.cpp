#include "doctest.h"

#include <cmath>
#include <numbers>

#include "moebius/euclidean.hpp"
#include "moebius/geodesy.hpp"
#include "moebius/heisenberg.hpp"

using namespace moebius;

namespace {

const std::vector<double> e1{1.0, 0.0};
const std::vector<double> ei{0.0, 1.0};

ExtendedPoint heis(const HeisenbergModel& m, Complex z, double h) { return m.encode({{z}, h}); }

}  // namespace

TEST_CASE("busemann functions") {
  const HeisenbergModel m(2);
  const auto o = heis(m, 0.0, 0.0);
  const auto l = m.line(o, e1);
  SUBCASE("closed form -Re z") {
    const auto b = busemann(m, l, heis(m, {0.3, -0.7}, 0.45));
    CHECK(b.value == doctest::Approx(-0.3).epsilon(1e-6));
    CHECK(b.error <= 1e-6);
  }
  SUBCASE("points on the line") {
    CHECK(busemann(m, l, l(2.5)).value == doctest::Approx(-2.5).epsilon(1e-9));
  }
  SUBCASE("euclidean") {
    const EuclideanModel em(2);
    const auto el = em.line(ExtendedPoint::finite({0.0, 0.0}), std::vector<double>{0.6, 0.8});
    const auto b = busemann(em, el, ExtendedPoint::finite({1.0, 2.0}));
    CHECK(b.value == doctest::Approx(-(0.6 + 1.6)).epsilon(1e-9));
  }
  SUBCASE("scheme validation and non-convergence") {
    BusemannScheme s;
    s.t_values = {1.0, 2.0};
    CHECK_THROWS_AS(busemann(m, l, o, s), MoebiusError);
    BusemannScheme tight;
    tight.t_values = {1.0, 2.0, 4.0};
    tight.extrapolation = 2;
    tight.tol = 1e-15;
    try {
      busemann(m, l, heis(m, {0.3, -0.7}, 0.45), tight);
      FAIL("expected NonConvergent");
    } catch (const MoebiusError& e) {
      CHECK(e.code() == ErrorCode::NonConvergent);
    }
  }
}

TEST_CASE("flatness and duality") {
  const HeisenbergModel m(2);
  const auto l = m.line(heis(m, {0.2, 0.1}, -0.3), e1);
  std::vector<ExtendedPoint> xs{heis(m, {0.3, -0.7}, 0.45), heis(m, {-2.0, 1.0}, -3.0), l(1.5)};
  CHECK(busemann_flat_residual(m, l, xs) <= 1e-5);
  const auto d = duality_residual(m, l, xs[0]);
  CHECK(d.residual <= 1e-4);
  CHECK(d.right_derivative == doctest::Approx(busemann(m, l, xs[0]).value).epsilon(1e-4));
}

TEST_CASE("slopes") {
  const HeisenbergModel m(2);
  const auto o = heis(m, 0.0, 0.0);
  const auto l = m.line(o, e1);
  CHECK(slope_estimate(m, l, l).alpha == doctest::Approx(-1.0).epsilon(1e-6));
  for (double th : {0.3, 1.2, std::numbers::pi / 2, 2.5}) {
    const auto lt = m.line(o, std::vector<double>{std::cos(th), std::sin(th)});
    CHECK(slope_estimate(m, lt, l).alpha == doctest::Approx(-std::cos(th)).epsilon(1e-6));
    CHECK(slope_symmetry_residual(m, l, lt) <= 1e-3);
    const auto rev = slope_estimate(m, lt.reversed(), l).alpha;
    CHECK(rev == doctest::Approx(std::cos(th)).epsilon(1e-6));
  }
}

TEST_CASE("zigzag") {
  const HeisenbergModel m(2);
  const auto o = heis(m, 0.0, 0.0);
  SUBCASE("single direction is the line itself") {
    const ZigzagSpec z{o, {e1}, {1.0}, 6};
    const auto poly = zigzag(m, z, -1.0, 1.0);
    const auto l = m.line(o, e1);
    CHECK(m.metric()(poly.at(m, 0.37), l(0.37)) < 1e-12);
    CHECK(m.metric()(poly.at(m, -0.81), l(-0.81)) < 1e-12);
  }
  SUBCASE("orthogonal frame endpoint speed") {
    const ZigzagSpec z{o, {e1, ei}, {1.0, 1.0}, 12};
    CHECK(zigzag_endpoint_speed(m, z, 2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
  }
  SUBCASE("busemann affinity halves per depth") {
    const std::vector<double> ld{std::cos(0.5), std::sin(0.5)};
    ZigzagSpec z{o, {e1, ei}, {1.0, 2.0}, 10};
    const auto a10 = zigzag_busemann_affinity(m, z, ld, 1.0);
    z.depth = 11;
    const auto a11 = zigzag_busemann_affinity(m, z, ld, 1.0);
    CHECK(a10.beta == doctest::Approx(-(std::cos(0.5) + 2.0 * std::sin(0.5)) / 3.0).epsilon(1e-6));
    CHECK(a11.deviation / a10.deviation == doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("invalid specs") {
    CHECK_THROWS_AS(zigzag(m, ZigzagSpec{o, {e1}, {0.0}, 3}, 0.0, 1.0), MoebiusError);
    CHECK_THROWS_AS(zigzag(m, ZigzagSpec{o, {e1}, {1.0}, 0}, 0.0, 1.0), MoebiusError);
  }
}

TEST_CASE("orthogonalization") {
  const HeisenbergModel m(3);
  const auto o = m.encode(heis_identity(2));
  const std::vector<double> ld{0.5, 0.5, 0.5, 0.5};
  const std::vector<std::vector<double>> full{
      {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const auto max = orthogonalize(m, o, full, ld);
  CHECK(max.sum_sq == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(max.degenerate);
  const auto part = orthogonalize(m, o, {full[0], full[1]}, ld);
  CHECK(part.sum_sq < 1.0 - 1e-3);
  CHECK_FALSE(part.degenerate);
  double sum = 0.0;
  for (double s : part.steps) sum += s;
  CHECK(sum == doctest::Approx(1.0));
  // The orthogonalized zigzag has zero slope against every frame line.
  ZigzagSpec z{o, part.directions, part.steps, 10};
  for (const auto& f : {part.directions[0], part.directions[1]}) {
    CHECK(std::abs(zigzag_busemann_affinity(m, z, f, 0.5).beta) < 1e-6);
  }
  CHECK_THROWS_AS(orthogonalize(m, o, {full[0], std::vector<double>{std::sqrt(0.5), std::sqrt(0.5), 0, 0}}, ld),
                  MoebiusError);
}

TEST_CASE("lifting") {
  const HeisenbergModel m(2);
  const std::vector<double> z0{0.0, 0.0};
  SUBCASE("unit square in a complex line") {
    BasePolygon p{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1, 0};
    const auto r = lift_polygon(m, p, m.fiber_point(z0, 0.0));
    CHECK(r.displacement == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.sign == 1);
    p.orientation = -1;
    CHECK(lift_polygon(m, p, m.fiber_point(z0, 0.0)).sign == -1);
  }
  SUBCASE("degenerate polygon") {
    BasePolygon p{{{0, 0}, {1, 0}, {2, 0}}, 1, 0};
    CHECK(lift_polygon(m, p, m.fiber_point(z0, 0.0)).displacement <= 1e-12);
  }
  SUBCASE("split polygons compose") {
    const BasePolygon q{{{0, 0}, {2, 0}, {2, 1}, {0, 1}}, 1, 0};
    const BasePolygon p1{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1, 0};
    const BasePolygon p2{{{1, 0}, {2, 0}, {2, 1}, {1, 1}}, 1, 3};
    const auto start = m.fiber_point(z0, 0.3);
    const auto whole = lift_polygon(m, q, start);
    const auto first = lift_polygon(m, p1, start);
    // Each lifting isometry translates along the fibers; composing adds shifts.
    const auto second = lift_polygon(m, p2, m.fiber_point(std::vector<double>{1.0, 1.0}, -0.8));
    CHECK(whole.fiber_shift == doctest::Approx(first.fiber_shift + second.fiber_shift).epsilon(1e-12));
    CHECK(whole.displacement == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("start off the pointed vertex") {
    BasePolygon p{{{0, 0}, {1, 0}, {1, 1}}, 1, 1};
    CHECK_THROWS_AS(lift_polygon(m, p, m.fiber_point(z0, 0.0)), MoebiusError);
  }
}

TEST_CASE("area law") {
  std::vector<Rectangle> rs;
  for (int i = 1; i <= 20; ++i) rs.push_back({{0.1 * i, -0.2}, 0.5 + 0.1 * i, 1.0 + 0.05 * i});
  const HeisenbergModel m2(2);
  const auto c = area_law_fit(m2, e1, ei, rs);
  CHECK(c.c == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(c.linear);
  const HeisenbergModel m3(3);
  std::vector<Rectangle> rs3;
  for (int i = 1; i <= 20; ++i) rs3.push_back({{0.1 * i, 0.0, -0.3, 0.2}, 0.5 + 0.1 * i, 1.0});
  const auto r = area_law_fit(m3, std::vector<double>{1, 0, 0, 0}, std::vector<double>{0, 0, 1, 0}, rs3);
  CHECK(r.c <= 1e-9);
}

TEST_CASE("xi and J") {
  const HeisenbergModel m(2);
  CHECK(xi(m, e1, ei) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(xi(m, e1, std::vector<double>{0.0, 0.0}) == 0.0);
  CHECK(xi(m, e1, std::vector<double>{0.0, -2.0}) == doctest::Approx(-8.0).epsilon(1e-9));
  CHECK_THROWS_AS(xi(m, e1, std::vector<double>{0.5, 1.0}), MoebiusError);
  const auto j = recover_J(m, e1);
  CHECK(std::abs(j.direction[0]) < 1e-4);
  CHECK(j.direction[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(j.value == doctest::Approx(4.0).epsilon(1e-4));
  const auto jj = recover_J(m, j.direction);
  CHECK(jj.direction[0] == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("distance components") {
  const HeisenbergModel m(3);
  const auto x = m.encode({{{0.3, 0.1}, {-0.2, 0.4}}, 0.7});
  const auto y = m.encode({{{-1.0, 0.5}, {0.6, 0.0}}, -0.2});
  const auto [a, b] = dist_components(m, x, y);
  const double d = m.koranyi_dist(x, y);
  CHECK(std::pow(d, 4) == doctest::Approx(std::pow(a, 4) + std::pow(b, 4)).epsilon(1e-12));
  const auto fib = m.encode({{{0.3, 0.1}, {-0.2, 0.4}}, 2.0});
  const auto c = dist_components(m, x, fib);
  CHECK(c.a == 0.0);
  CHECK(c.b == doctest::Approx(m.koranyi_dist(x, fib)));
}

TEST_CASE("unit r-circle diagnostics") {
  const HeisenbergModel m(2);
  const auto sigma = m.unit_r_circle(1.0);
  const auto rep = circle_diagnostics(m, sigma, std::vector<double>{0.0, 0.0});
  CHECK(rep.radius == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.mean_geometric <= 1e-8);
  CHECK(rep.unit_radius <= 1e-9);
  CHECK(rep.equal_distances <= 1e-9);
  CHECK(rep.two_sheets);
  CHECK(rep.fiber_pythagoras <= 1e-12);
  CHECK(rep.rectifiability_exponent > 2.5);
  CHECK_THROWS_AS(circle_diagnostics(m, sigma, std::vector<double>{5.0, 0.0}), MoebiusError);

  const auto o = heis(m, 0.0, 0.0);
  const auto q = quadratic_excess_check(m, sigma, {o, e1});
  CHECK(q.margin >= -1e-6);
  CHECK(q.alpha_agree);
}
