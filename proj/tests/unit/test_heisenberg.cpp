#include "doctest.h"

#include <cmath>

#include "moebius/heisenberg.hpp"

using namespace moebius;

namespace {

HeisElement el(std::initializer_list<Complex> z, double h) { return {CVector(z), h}; }

// The gauge distance amplifies fiber rounding to its square root; compare
// coordinates instead.
double coord_gap(const ExtendedPoint& a, const ExtendedPoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a == b ? 0.0 : INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("group law") {
  const auto a = el({{1.0, 0.0}}, 0.0);
  const auto b = el({{0.0, 1.0}}, 0.0);
  const auto ab = heis_mul(a, b);
  CHECK(ab.z[0] == Complex(1.0, 1.0));
  CHECK(ab.h == doctest::Approx(0.5));
  const auto c = heis_commutator(a, b);
  CHECK(std::abs(c.z[0]) == 0.0);
  CHECK(c.h == doctest::Approx(1.0));
  CHECK(heis_mul(a, heis_inverse(a)) == heis_identity(1));
}

TEST_CASE("gauge and distance") {
  CHECK(koranyi_gauge(el({{0.0, 0.0}}, 1.0)) == doctest::Approx(2.0));
  CHECK(koranyi_gauge(el({{3.0, 4.0}}, 0.0)) == doctest::Approx(5.0));
  const auto x = el({{0.3, -1.0}, {2.0, 0.5}}, 0.7);
  const auto y = el({{-0.4, 0.2}, {1.0, -0.5}}, -1.1);
  CHECK(koranyi_distance(x, y) == koranyi_distance(y, x));
  CHECK(koranyi_distance(x, y) == doctest::Approx(koranyi_gauge(heis_mul(heis_inverse(y), x))));
  CHECK(im_hermitian(x.z, y.z) == -im_hermitian(y.z, x.z));
}

TEST_CASE("fiber distance") {
  const HeisenbergModel m(2);
  const auto p = m.encode(el({{0.5, 0.5}}, 0.0));
  const auto q = m.encode(el({{0.5, 0.5}}, 2.25));
  CHECK(m.koranyi_dist(p, q) == doctest::Approx(3.0));
}

TEST_CASE("koranyi inversion") {
  const HeisenbergModel m(2);
  const auto iota = m.koranyi_inversion();
  const auto o = m.encode(heis_identity(1));
  CHECK(iota(o).is_infinity());
  CHECK(iota(ExtendedPoint::infinity()) == o);
  const auto x = m.encode(el({{0.0, 0.0}}, 0.25));
  CHECK(m.decode(iota(x)).h == doctest::Approx(-0.25));
  const auto y = m.encode(el({{2.0, 0.0}}, 0.0));
  CHECK(m.decode(iota(y)).z[0].real() == doctest::Approx(-0.5));
  const auto p = m.encode(el({{0.3, -0.7}}, 0.4));
  const auto q = m.encode(el({{-1.1, 0.2}}, -0.9));
  const double lhs = m.koranyi_dist(iota(p), iota(q));
  const double rhs = m.koranyi_dist(p, q) / (m.koranyi_dist(o, p) * m.koranyi_dist(o, q));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  CHECK_THROWS_AS(koranyi_invert(heis_identity(1)), MoebiusError);
}

TEST_CASE("space inversion") {
  const HeisenbergModel m(3);
  const auto o = m.encode(heis_identity(2));
  const auto inf = ExtendedPoint::infinity();
  const auto p = m.encode(el({{0.2, 0.1}, {-0.3, 0.0}}, 0.4));
  const auto q = m.encode(el({{1.0, -0.5}, {0.3, 0.3}}, -0.2));
  SUBCASE("origin and infinity") {
    const auto f = m.space_inversion(inf, o, 1.0);
    const auto x = m.encode(el({{0.5, 0.5}, {0.1, 0.0}}, 0.3));
    CHECK(coord_gap(f(x), m.koranyi_inversion()(x)) < 1e-14);
  }
  SUBCASE("two finite poles are swapped") {
    const auto f = m.space_inversion(p, q, 0.7);
    CHECK(coord_gap(f(p), q) < 1e-12);
    CHECK(coord_gap(f(q), p) < 1e-12);
    const auto x = m.encode(el({{0.5, 0.5}, {0.1, 0.0}}, 0.3));
    CHECK(coord_gap(f(f(x)), x) < 1e-12);
  }
  CHECK_THROWS_AS(m.space_inversion(p, p, 1.0), MoebiusError);
  CHECK_THROWS_AS(m.space_inversion(p, q, -1.0), MoebiusError);
}

TEST_CASE("horizontal lines are isometric") {
  const HeisenbergModel m(3);
  const auto g = el({{0.3, 0.1}, {-0.4, 0.9}}, 1.2);
  const double s = std::sqrt(0.5);
  const auto l = m.horizontal_line(g, CVector{{s, 0.0}, {0.0, s}});
  CHECK(m.koranyi_dist(l(-1.25), l(2.0)) == doctest::Approx(3.25).epsilon(1e-14));
  CHECK_THROWS_AS(m.horizontal_line(g, CVector{{1.0, 0.0}, {1.0, 0.0}}), MoebiusError);
}

TEST_CASE("c-circles") {
  const HeisenbergModel m(2);
  const auto p = m.encode(el({{0.3, 0.0}}, 0.0));
  const auto q = m.encode(el({{-0.2, 0.5}}, 1.0));
  const auto c = m.c_circle_through(p, q);
  CHECK_FALSE(c.vertical);
  CHECK(coord_gap(c.curve(0.0), q) == 0.0);
  // Sending q to infinity straightens the circle into the fiber through p.
  const auto psi = m.space_inversion(q, ExtendedPoint::infinity(), 1.0);
  const auto base = m.decode(psi(p)).z;
  double worst = 0.0;
  for (const auto& w : c.curve.sample(32)) {
    if (w == q) continue;
    worst = std::max(worst, std::abs(m.decode(psi(w)).z[0] - base[0]));
  }
  CHECK(worst < 1e-12);
  // C-circles are not Ptolemy circles.
  CHECK(circle_residual(m.metric(), c.curve.sample(16)) > 1e-3);
  const auto v = m.c_circle_through(p, ExtendedPoint::infinity());
  CHECK(v.vertical);
}

TEST_CASE("unit r-circle") {
  const HeisenbergModel m(2);
  const auto sigma = m.unit_r_circle(1.0);
  const auto o = m.encode(heis_identity(1));
  for (int j = 0; j < 64; ++j) {
    const auto w = sigma(0.1 + j * 0.098);
    CHECK(m.koranyi_dist(o, w) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(circle_residual(m.metric(), sigma.sample(12)) < 1e-9);
}

TEST_CASE("r-circle from a line through the pole is rejected") {
  const HeisenbergModel m(2);
  const auto l = m.horizontal_line(el({{1.0, 0.0}}, 0.0), CVector{{1.0, 0.0}});
  CHECK_THROWS_AS(m.r_circle_from_line(l, m.koranyi_inversion()), MoebiusError);
  const auto l2 = m.horizontal_line(el({{0.0, 0.0}}, 0.5), CVector{{1.0, 0.0}});
  CHECK_NOTHROW(m.r_circle_from_line(l2, m.koranyi_inversion()));
}

TEST_CASE("dimension checks") {
  CHECK_THROWS_AS(HeisenbergModel(1), MoebiusError);
  CHECK_THROWS_AS(HeisenbergModel(5), MoebiusError);
  CHECK_NOTHROW(HeisenbergModel(5, 6));
  const HeisenbergModel m(2);
  CHECK_THROWS_AS(m.encode(el({{0.0, 0.0}, {1.0, 0.0}}, 0.0)), MoebiusError);
}
