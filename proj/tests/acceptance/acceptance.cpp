// Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "moebius/euclidean.hpp"
#include "moebius/geodesy.hpp"
#include "moebius/heisenberg.hpp"
#include "moebius/vec.hpp"
#include "moebius/verify.hpp"

using namespace moebius;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

HeisElement random_element(Rng& rng, std::size_t dim) {
  HeisElement g;
  g.z.resize(dim);
  for (auto& c : g.z) c = {gaussian(rng), gaussian(rng)};
  g.h = gaussian(rng);
  return g;
}

ExtendedPoint random_point(const HeisenbergModel& m, Rng& rng) {
  return m.encode(random_element(rng, m.complex_dim()));
}

std::vector<double> random_unit(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = gaussian(rng);
  return vec::normalized(v);
}

std::vector<double> times_i(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j + 1 < v.size(); j += 2) {
    out[j] = -v[j + 1];
    out[j + 1] = v[j];
  }
  return out;
}

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

double coord_gap(const ExtendedPoint& a, const ExtendedPoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a == b ? 0.0 : INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<Rectangle> rectangles(Rng& rng, std::size_t dim, std::size_t n) {
  std::vector<Rectangle> rs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> corner(dim);
    for (auto& x : corner) x = gaussian(rng);
    rs.push_back({corner, uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 2.0)});
  }
  return rs;
}

// ---------------------------------------------------------------------------

Verdict lifting_constant() {
  Verdict v;
  const auto t0 = Clock::now();
  Rng rng = make_rng(101);
  const HeisenbergModel m2(2);
  const auto u = random_unit(2, rng);
  const auto fit = area_law_fit(m2, u, times_i(u), rectangles(rng, 2, 24));
  const HeisenbergModel m3(3);
  const std::vector<double> e1{1, 0, 0, 0};
  const std::vector<double> e2{0, 0, 1, 0};
  const auto real_fit = area_law_fit(m3, e1, e2, rectangles(rng, 4, 24));
  const double t = seconds_since(t0);
  v.detail << "complex line c=" << fit.c << " over 24 rectangles; totally real c=" << real_fit.c << "; " << t << " s";
  v.require(std::abs(fit.c - 2.0) <= 1e-6, "|c-2| <= 1e-6");
  v.require(real_fit.c <= 1e-6, "totally real c <= 1e-6");
  v.require(t <= 2.0, "runtime <= 2 s");
  return v;
}

Verdict distance_law() {
  Verdict v;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int k : {2, 3}) {
    const HeisenbergModel m(k);
    Rng rng = make_rng(102, static_cast<std::uint64_t>(k));
    std::vector<std::pair<ExtendedPoint, ExtendedPoint>> pairs;
    for (int i = 0; i < 10000; ++i) pairs.emplace_back(random_point(m, rng), random_point(m, rng));
    worst = std::max(worst, d_law_residual(m, pairs));
  }
  const double t = seconds_since(t0);
  v.detail << "max |d^4-(a^4+b^4)|/d^4 = " << worst << " over 2x10^4 pairs (k=2,3); " << t << " s";
  v.require(worst <= 1e-9, "residual <= 1e-9");
  v.require(t <= 2.0, "runtime <= 2 s");
  return v;
}

Verdict ptolemy_property() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto e = ptolemy_scan(euclidean_metric(3), [](Rng& r) {
    return ExtendedPoint::finite({gaussian(r), gaussian(r), gaussian(r)});
  }, 100000, 103);
  const HeisenbergModel m(2);
  const auto h = ptolemy_scan(m.metric(), [&m](Rng& r) { return random_point(m, r); }, 100000, 104);
  const auto l1 = ptolemy_scan(manhattan_metric(2), [](Rng& r) {
    return ExtendedPoint::finite({gaussian(r), gaussian(r)});
  }, 10000, 105);
  const double t = seconds_since(t0);
  v.detail << "min slack euclid=" << e.min_slack << " heis=" << h.min_slack << " (10^5 each); L1 violations="
           << l1.violations << "/10^4; " << t << " s";
  v.require(e.min_slack >= -1e-12 && h.min_slack >= -1e-12, "min slack >= -1e-12");
  v.require(l1.violations > 0, "L1 violation found");
  v.require(t <= 10.0, "runtime <= 10 s");
  return v;
}

Verdict moebius_invariance() {
  Verdict v;
  double worst = 0.0;
  for (int k : {2, 3}) {
    const HeisenbergModel m(k);
    Rng rng = make_rng(106, static_cast<std::uint64_t>(k));
    std::vector<Quadruple> quads;
    for (int i = 0; i < 1000; ++i) {
      quads.push_back({random_point(m, rng), random_point(m, rng), random_point(m, rng), random_point(m, rng)});
    }
    const std::vector<MoebiusMap> maps{
        m.left_translation(random_element(rng, m.complex_dim())),
        m.dilation(2.7),
        m.rotation(Unitary::random(m.complex_dim(), rng)),
        m.conj_flip(),
        m.koranyi_inversion(),
        m.space_inversion(random_point(m, rng), random_point(m, rng), 0.8),
    };
    for (const auto& f : maps) worst = std::max(worst, moebius_residual(m.metric(), f, quads));
  }
  v.detail << "max crt change " << worst << " over 10^3 quadruples x 6 maps (k=2,3)";
  v.require(worst <= 1e-9, "residual <= 1e-9");
  return v;
}

Verdict inversion_duality() {
  Verdict v;
  const HeisenbergModel m(2);
  Rng rng = make_rng(107);
  const auto o = m.encode(heis_identity(1));
  const auto pulled = pullback(m.metric(), m.koranyi_inversion());
  const auto minv = m_invert(m.metric(), o, 1.0);
  double pull = 0.0;
  double sphere = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto x = random_point(m, rng);
    const auto y = random_point(m, rng);
    pull = std::max(pull, rel(pulled(x, y), minv(x, y)));
    const double r = std::exp(0.5 * gaussian(rng));
    const auto f = m.space_inversion(y, ExtendedPoint::infinity(), r);
    sphere = std::max(sphere, rel(m.koranyi_dist(f(x), y), r * r / m.koranyi_dist(x, y)));
  }
  v.detail << "pullback vs m-inversion " << pull << ", sphere radius r^2/r' " << sphere << " (10^4 pairs)";
  v.require(pull <= 1e-10, "pullback <= 1e-10");
  v.require(sphere <= 1e-10, "sphere map <= 1e-10");
  return v;
}

Verdict fiber_geometry() {
  Verdict v;
  const HeisenbergModel m(2);
  Rng rng = make_rng(108);
  double pyth = 0.0;
  double closed = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const CVector base{{gaussian(rng), gaussian(rng)}};
    std::array<double, 3> h{gaussian(rng), gaussian(rng), gaussian(rng)};
    std::sort(h.begin(), h.end());
    const auto x = m.encode({base, h[0]});
    const auto y = m.encode({base, h[1]});
    const auto z = m.encode({base, h[2]});
    const double xy = m.koranyi_dist(x, y), yz = m.koranyi_dist(y, z), xz = m.koranyi_dist(x, z);
    pyth = std::max(pyth, rel(xz * xz, xy * xy + yz * yz));
    closed = std::max(closed, rel(xy, 2.0 * std::sqrt(h[1] - h[0])));
  }
  v.detail << "Pythagoras " << pyth << ", 2 sqrt|dh| " << closed << " (10^3 ordered triples)";
  v.require(pyth <= 1e-12, "Pythagoras <= 1e-12");
  v.require(closed <= 1e-12, "closed form <= 1e-12");
  return v;
}

Verdict group_structure() {
  Verdict v;
  const HeisenbergModel m(3);
  Rng rng = make_rng(109);
  double assoc = 0.0;
  double comm_base = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = random_element(rng, 2), b = random_element(rng, 2), c = random_element(rng, 2);
    assoc = std::max(assoc, coord_gap(m.encode(heis_mul(heis_mul(a, b), c)), m.encode(heis_mul(a, heis_mul(b, c)))));
    for (const auto& z : heis_commutator(a, b).z) comm_base = std::max(comm_base, std::abs(z));
  }
  const auto c = heis_commutator({{1.0, 0.0}, 0.0}, {{Complex(0.0, 1.0), 0.0}, 0.0});
  const bool explicit_ok = c.z == CVector{0.0, 0.0} && std::abs(c.h - 1.0) <= 1e-15;
  v.detail << "associativity " << assoc << " (10^4 triples), commutator base " << comm_base << ", [(1,0),(i,0)] = (0,"
           << c.h << ")";
  v.require(assoc <= 1e-12, "associativity <= 1e-12");
  v.require(comm_base == 0.0, "commutators central");
  v.require(explicit_ok, "(0,1) is a commutator");
  return v;
}

Verdict busemann_suite() {
  Verdict v;
  const HeisenbergModel m(2);
  Rng rng = make_rng(110);
  const auto l = m.line(random_point(m, rng), random_unit(2, rng));
  std::vector<ExtendedPoint> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(random_point(m, rng));
  const double flat = busemann_flat_residual(m, l, xs);
  double dual = 0.0;
  for (int i = 0; i < 10; ++i) dual = std::max(dual, duality_residual(m, l, xs[static_cast<std::size_t>(i)]).residual);
  double sym = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto x = random_point(m, rng);
    sym = std::max(sym, slope_symmetry_residual(m, m.line(x, random_unit(2, rng)), m.line(x, random_unit(2, rng))));
  }
  const double self = slope_estimate(m, l, l).alpha;
  v.detail << "flatness " << flat << " (100 points), duality " << dual << ", slope symmetry " << sym
           << " (50 pairs), slope(l,l) = " << self;
  v.require(flat <= 1e-5, "flatness <= 1e-5");
  v.require(dual <= 1e-4, "duality <= 1e-4");
  v.require(sym <= 2e-3, "symmetry <= 2e-3");
  v.require(std::abs(self + 1.0) <= 1e-6, "slope(l,l) = -1");
  return v;
}

Verdict zigzag_suite() {
  Verdict v;
  const HeisenbergModel m(2);
  const auto o = m.encode(heis_identity(1));
  Rng rng = make_rng(111);
  ZigzagSpec z{o, {random_unit(2, rng), random_unit(2, rng)}, {0.7, 0.4}, 12};
  const auto ld = random_unit(2, rng);
  const auto a12 = zigzag_busemann_affinity(m, z, ld, 1.0);
  z.depth = 13;
  const auto a13 = zigzag_busemann_affinity(m, z, ld, 1.0);
  const double ratio = a13.deviation / a12.deviation;

  const std::vector<double> e1{1, 0}, ei{0, 1};
  const ZigzagSpec orth{o, {e1, ei}, {1.0, 2.0}, 12};
  const double speed = zigzag_endpoint_speed(m, orth, 3.0);
  const double expect = std::sqrt(5.0) / 3.0;

  const HeisenbergModel m3(3);
  const std::vector<std::vector<double>> frame{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
  const auto orth3 = orthogonalize(m3, m3.encode(heis_identity(2)), frame, random_unit(4, rng));

  v.detail << "affinity deviation " << a12.deviation << " at depth 12, ratio " << ratio << " to depth 13; speed "
           << speed << " vs " << expect << "; sum a_i^2 = " << orth3.sum_sq;
  v.require(a12.deviation <= 1e-3, "deviation <= 1e-3");
  v.require(std::abs(ratio - 0.5) <= 1e-2, "deviation halves");
  v.require(std::abs(speed - expect) <= 1e-3, "speed within 1e-3");
  v.require(std::abs(orth3.sum_sq - 1.0) <= 1e-3, "sum a_i^2 = 1");
  return v;
}

Verdict r_circle_suite() {
  Verdict v;
  const HeisenbergModel m(2);
  const auto sigma = m.unit_r_circle(1.0);
  Rng rng = make_rng(112);

  double ptolemy = circle_residual(m.metric(), sigma.sample(16));
  for (int i = 0; i < 10; ++i) {
    const Line l = m.horizontal_line(random_element(rng, 1), m.to_complex(random_unit(2, rng)));
    const auto c = m.r_circle_from_line(l, m.space_inversion(random_point(m, rng), ExtendedPoint::infinity(), 1.3));
    ptolemy = std::max(ptolemy, circle_residual(m.metric(), c.sample(12)));
  }
  const auto rep = circle_diagnostics(m, sigma, std::vector<double>{0.0, 0.0});
  const OrientedLine axis{m.encode(heis_identity(1)), {1.0, 0.0}};
  const auto q = quadratic_excess_check(m, sigma, axis);

  const auto j = recover_J(m, axis.direction).direction;
  double angle = 0.0;
  for (double s : circle_line_crossings(m, sigma, axis)) {
    const auto t = tangent_line(m, sigma, s);
    angle = std::max(angle, std::acos(std::min(1.0, std::abs(vec::dot(t.line.direction, j)))));
  }
  v.detail << "Ptolemy " << ptolemy << ", mean-geometric " << rep.mean_geometric << ", unit radius " << rep.unit_radius
           << ", quadratic excess margin " << q.margin << ", complex-line angle " << angle;
  v.require(ptolemy <= 1e-9, "circle residual <= 1e-9");
  v.require(rep.mean_geometric <= 1e-8, "mean-geometric <= 1e-8");
  v.require(rep.unit_radius <= 1e-9, "unit radius <= 1e-9");
  v.require(q.margin >= -1e-6, "margin >= -1e-6");
  v.require(angle <= 1e-3, "complex line <= 1e-3");
  return v;
}

Verdict j_recovery() {
  Verdict v;
  const HeisenbergModel m(2);
  Rng rng = make_rng(113);
  double angle = 0.0, square = 0.0, norm = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto u = random_unit(2, rng);
    const auto j = recover_J(m, u);
    const auto jj = recover_J(m, j.direction);
    angle = std::max(angle, std::acos(std::clamp(vec::dot(j.direction, times_i(u)), -1.0, 1.0)));
    square = std::max(square, std::acos(std::clamp(-vec::dot(jj.direction, u), -1.0, 1.0)));
    norm = std::max(norm, std::abs(j.value - 4.0));
  }
  v.detail << "angle to iu " << angle << ", J^2 = -id angle " << square << ", ||xi_u| - 4| " << norm;
  v.require(angle <= 1e-4, "J = i within 1e-4");
  v.require(square <= 1e-4, "J^2 = -id within 1e-4");
  v.require(norm <= 1e-4, "|xi_u| = 4 within 1e-4");
  return v;
}

Verdict full_check() {
  Verdict v;
  const auto t0 = Clock::now();
  std::size_t total = 0, failed = 0;
  bool identical = true;
  for (int k : {2, 3}) {
    SuiteConfig c;
    c.k = k;
    const auto a = run_all(c);
    const auto b = run_all(c);
    total += a.reports.size();
    failed += a.failed;
    identical = identical && to_json(a, c).dump() == to_json(b, c).dump();
    for (const auto& r : a.reports)
      if (!r.pass) v.detail << " " << r.tag << "(k=" << k << ")";
  }
  const double t = seconds_since(t0) / 2.0;
  v.detail << " " << total - failed << "/" << total << " suites pass (k=2,3), " << t << " s per run, repeat "
           << (identical ? "bit-identical" : "differs");
  v.require(failed == 0, "all suites pass");
  v.require(identical, "repeat runs bit-identical");
  v.require(t < 60.0, "under 60 s");
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"lifting constant", lifting_constant},
      {"distance law", distance_law},
      {"Ptolemy property", ptolemy_property},
      {"Moebius invariance", moebius_invariance},
      {"inversion duality", inversion_duality},
      {"fiber geometry", fiber_geometry},
      {"group structure", group_structure},
      {"Busemann functions", busemann_suite},
      {"zigzag curves", zigzag_suite},
      {"R-circles", r_circle_suite},
      {"J recovery", j_recovery},
      {"full check run", full_check},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " exception: " << e.what();
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.str().c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
