#include "moebius/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <thread>

#include "moebius/euclidean.hpp"
#include "moebius/geodesy.hpp"
#include "moebius/heisenberg.hpp"
#include "moebius/io.hpp"
#include "moebius/vec.hpp"

namespace moebius {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Ctx {
  const SuiteConfig& cfg;
  Rng rng;

  std::size_t count(std::size_t fallback) const { return cfg.samples ? cfg.samples : fallback; }
};

/// Running maximum of a residual together with the input that produced it.
class Worst {
 public:
  template <class Witness>
  void offer(double r, Witness&& witness) {
    ++n_;
    if (std::isnan(r)) r = kInf;
    if (r > value_ || !witness_) {
      value_ = r;
      witness_ = witness();
    }
  }

  void count(std::size_t k = 1) { n_ += k; }

  double value() const { return value_; }
  std::size_t n() const { return n_; }
  const std::optional<json>& witness() const { return witness_; }

 private:
  double value_ = 0.0;
  std::size_t n_ = 0;
  std::optional<json> witness_;
};

struct Outcome {
  double residual = 0.0;
  std::size_t n = 0;
  std::optional<json> witness;

  Outcome() = default;
  Outcome(const Worst& w) : residual(w.value()), n(w.n()), witness(w.witness()) {}
};

using SuiteFn = std::function<Outcome(Ctx&)>;

struct Suite {
  SuiteInfo info;
  SuiteFn run;
};

double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

double coord_gap(const ExtendedPoint& a, const ExtendedPoint& b) {
  if (a.is_infinity() || b.is_infinity()) return a == b ? 0.0 : kInf;
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Coordinate gap scaled by the size of the reference point.
double scaled_gap(const ExtendedPoint& a, const ExtendedPoint& ref) {
  if (ref.is_infinity()) return coord_gap(a, ref);
  double s = 1.0;
  for (double c : ref.coords()) s = std::max(s, std::abs(c));
  return coord_gap(a, ref) / s;
}

HeisElement random_element(Rng& rng, std::size_t dim, double scale = 1.0) {
  HeisElement g;
  g.z.resize(dim);
  for (auto& c : g.z) c = {scale * gaussian(rng), scale * gaussian(rng)};
  g.h = scale * scale * gaussian(rng);
  return g;
}

ExtendedPoint random_point(const HeisenbergModel& m, Rng& rng) {
  return m.encode(random_element(rng, m.complex_dim()));
}

ExtendedPoint random_euclid(std::size_t n, Rng& rng) {
  std::vector<double> c(n);
  for (auto& x : c) x = gaussian(rng);
  return ExtendedPoint::finite(std::move(c));
}

std::vector<double> random_unit(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = gaussian(rng);
  return vec::normalized(v);
}

/// Real form of i*v for a base vector stored as (Re z1, Im z1, ...).
std::vector<double> times_i(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j + 1 < v.size(); j += 2) {
    out[j] = -v[j + 1];
    out[j + 1] = v[j];
  }
  return out;
}

/// Unit vector orthogonal to both u and i*u.
std::vector<double> real_orthogonal(std::span<const double> u, Rng& rng) {
  const auto iu = times_i(u);
  auto w = random_unit(u.size(), rng);
  w = vec::axpy(w, -vec::dot(w, u), u);
  w = vec::axpy(w, -vec::dot(w, iu), iu);
  return vec::normalized(w);
}

double angle_between_lines(std::span<const double> a, std::span<const double> b) {
  const double c = std::abs(vec::dot(a, b)) / (vec::norm(a) * vec::norm(b));
  return std::acos(std::min(1.0, c));
}

json vector_json(std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); }

json element_json(const HeisenbergModel& m, const HeisElement& g) {
  return point_to_json(m.encode(g));
}

Quadruple random_quadruple(const std::function<ExtendedPoint(Rng&)>& sample, Rng& rng,
                           bool allow_infinity, std::size_t index) {
  Quadruple q{sample(rng), sample(rng), sample(rng), sample(rng)};
  if (allow_infinity && index % 8 == 7) q[3] = ExtendedPoint::infinity();
  return q;
}

Outcome moebius_suite(Ctx& ctx, const HeisenbergModel& m, const MoebiusMap& f) {
  const std::size_t n = ctx.count(1000);
  Worst w;
  for (std::size_t i = 0; i < n; ++i) {
    const Quadruple q = random_quadruple([&](Rng& r) { return random_point(m, r); }, ctx.rng, true, i);
    const Quadruple one[1] = {q};
    const double r = moebius_residual(m.metric(), f, one);
    w.offer(r, [&] { return json{{"quadruple", quadruple_to_json(q)}, {"map", f.label}}; });
  }
  return w;
}

/// R-circles of varying radius, center and complex orientation, each with the
/// Ptolemy line through its center meeting it on the real axis of the frame.
struct PlacedCircle {
  ClosedCurve sigma;
  std::vector<double> center_base;
  OrientedLine axis;
  double radius = 1.0;
  json description;
};

std::vector<PlacedCircle> placed_circles(const HeisenbergModel& m, Rng& rng, std::size_t count) {
  std::vector<PlacedCircle> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double radius = i == 0 ? 1.0 : std::exp(0.5 * gaussian(rng));
    const HeisElement g = i == 0 ? heis_identity(m.complex_dim()) : random_element(rng, m.complex_dim());
    const Unitary u = i == 0 ? Unitary::identity(m.complex_dim()) : Unitary::random(m.complex_dim(), rng);
    const MoebiusMap place = compose(m.left_translation(g), m.rotation(u));
    const ClosedCurve base = m.unit_r_circle(radius);
    PlacedCircle c;
    c.sigma = {[base, place](double a) { return place(base(a)); }, "r-circle"};
    c.center_base = m.to_real(g.z);
    c.axis = {m.encode(g), m.to_real(u.apply(CVector(m.unit_direction(0))))};
    c.radius = radius;
    c.description = json{{"center", element_json(m, g)}, {"radius", radius}};
    out.push_back(std::move(c));
  }
  return out;
}

/// Least-squares slope of log dist(sigma(s0+h), l) against log h for
/// h = 1e-2 * 4^-j, j = 0..4.
double distance_exponent(const HeisenbergModel& m, const ClosedCurve& sigma, double s0, const OrientedLine& l) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const int n = 5;
  for (int j = 0; j < n; ++j) {
    const double h = 1e-2 * std::pow(4.0, -j);
    const double x = std::log(h);
    const double y = std::log(distance_to_line(m, l, sigma(s0 + h)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Suites

std::vector<Suite> build_registry() {
  std::vector<Suite> s;
  auto add = [&](std::string tag, std::string anchor, SuiteGroup group, double tol,
                 std::string description, SuiteFn fn) {
    static const std::set<std::string> euclid_tags{"eq:PT_eq/euclidean-circles", "ptolemy:euclidean-scan",
                                                   "negative:L1-not-ptolemy", "moebius:chordal-euclidean"};
    const bool euclid = euclid_tags.count(tag) > 0;
    s.push_back({{std::move(tag), std::move(anchor), std::move(description), group, tol, euclid ? "euclid" : "heis"},
                 std::move(fn)});
  };
  auto heis = [](const Ctx& c) { return HeisenbergModel(c.cfg.k); };

  // --- exact algebra ------------------------------------------------------

  add("lem:mult_hermitian", "lem:mult_hermitian", SuiteGroup::Exact, 1e-12,
      "Group law g*g' = (z+z', h+h' - Im(z,z')/2): associativity and inverses on random triples.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(10000); i < n; ++i) {
          const auto a = random_element(c.rng, m.complex_dim());
          const auto b = random_element(c.rng, m.complex_dim());
          const auto d = random_element(c.rng, m.complex_dim());
          const double r = std::max(
              coord_gap(m.encode(heis_mul(heis_mul(a, b), d)), m.encode(heis_mul(a, heis_mul(b, d)))),
              coord_gap(m.encode(heis_mul(a, heis_inverse(a))), m.encode(heis_identity(m.complex_dim()))));
          w.offer(r, [&] { return json{{"triple", {element_json(m, a), element_json(m, b), element_json(m, d)}}}; });
        }
        return w;
      });

  add("lem:z_in_center", "lem:z_in_center", SuiteGroup::Exact, 1e-12,
      "\"The group Z lies in the center of N\": fiber translations commute with all elements, "
      "commutators have zero base part, and (0,1) is the commutator of (1,0) and (i,0).",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const std::size_t dim = m.complex_dim();
        Worst w;
        for (std::size_t i = 0, n = c.count(10000); i < n; ++i) {
          const auto a = random_element(c.rng, dim);
          const auto b = random_element(c.rng, dim);
          HeisElement zc = heis_identity(dim);
          zc.h = gaussian(c.rng);
          const auto comm = heis_commutator(a, b);
          double r = coord_gap(m.encode(heis_mul(zc, a)), m.encode(heis_mul(a, zc)));
          for (const auto& z : comm.z) r = std::max(r, std::abs(z));
          w.offer(r, [&] { return json{{"a", element_json(m, a)}, {"b", element_json(m, b)}}; });
        }
        CVector one(dim), i_(dim);
        one[0] = 1.0;
        i_[0] = Complex(0.0, 1.0);
        const auto comm = heis_commutator({one, 0.0}, {i_, 0.0});
        HeisElement expect = heis_identity(dim);
        expect.h = 1.0;
        w.offer(coord_gap(m.encode(comm), m.encode(expect)), [&] { return json{{"commutator", element_json(m, comm)}}; });
        return w;
      });

  add("eq:koranyi_gauge", "eq:koranyi_gauge", SuiteGroup::Exact, 1e-12,
      "|xx'|^4 = |z-z'|^4 + 16|h-h'-Im(z,z')/2|^2: the distance is the gauge of x'^-1 x, symmetric "
      "and left invariant, with N(0,1) = 2.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const std::size_t dim = m.complex_dim();
        Worst w;
        HeisElement unit_fiber = heis_identity(dim);
        unit_fiber.h = 1.0;
        w.offer(rel(koranyi_gauge(unit_fiber), 2.0), [] { return json{{"case", "N(0,1)"}}; });
        for (std::size_t i = 0, n = c.count(10000); i < n; ++i) {
          const auto x = random_element(c.rng, dim);
          const auto y = random_element(c.rng, dim);
          const auto g = random_element(c.rng, dim);
          const double d = koranyi_distance(x, y);
          const double r = std::max({rel(d, koranyi_gauge(heis_mul(heis_inverse(y), x))),
                                     rel(d, koranyi_distance(y, x)),
                                     rel(d, koranyi_distance(heis_mul(g, x), heis_mul(g, y)))});
          w.offer(r, [&] { return json{{"x", element_json(m, x)}, {"y", element_json(m, y)}, {"g", element_json(m, g)}}; });
        }
        return w;
      });

  add("prop:euclid_square_fiber", "pro:euclid_square_fiber", SuiteGroup::Exact, 1e-12,
      "\"|xz|^2 = |xy|^2 + |yz|^2\" for ordered points x < y < z of a C-line, and the fiber "
      "distance is 2 sqrt|dh|.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(1000); i < n; ++i) {
          const auto base = random_element(c.rng, m.complex_dim()).z;
          std::array<double, 3> h{gaussian(c.rng), gaussian(c.rng), gaussian(c.rng)};
          std::sort(h.begin(), h.end());
          const auto x = m.encode({base, h[0]});
          const auto y = m.encode({base, h[1]});
          const auto z = m.encode({base, h[2]});
          const double xy = m.koranyi_dist(x, y);
          const double yz = m.koranyi_dist(y, z);
          const double xz = m.koranyi_dist(x, z);
          const double r = std::max(rel(xz * xz, xy * xy + yz * yz),
                                    rel(xz, 2.0 * std::sqrt(h[2] - h[0])));
          w.offer(r, [&] { return json{{"x", point_to_json(x)}, {"y", point_to_json(y)}, {"z", point_to_json(z)}}; });
        }
        return w;
      });

  add("prop:vert_flip", "pro:vert_flip", SuiteGroup::Exact, 1e-12,
      "The vertical flip j(z,h) = (conj z, -h) is an isometric involution.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const auto j = m.conj_flip();
        Worst w;
        for (std::size_t i = 0, n = c.count(10000); i < n; ++i) {
          const auto x = random_point(m, c.rng);
          const auto y = random_point(m, c.rng);
          const double r = std::max(rel(m.koranyi_dist(j(x), j(y)), m.koranyi_dist(x, y)), coord_gap(j(j(x)), x));
          w.offer(r, [&] { return json{{"x", point_to_json(x)}, {"y", point_to_json(y)}}; });
        }
        return w;
      });

  // --- Ptolemy property -----------------------------------------------------

  add("eq:PT_eq/euclidean-circles", "eq:PT_eq", SuiteGroup::Exact, 1e-12,
      "Ptolemy equality d(x,z)d(y,u) = d(x,y)d(z,u) + d(x,u)d(y,z) on round circles of R^3.",
      [](Ctx& c) -> Outcome {
        Worst w;
        for (std::size_t i = 0, n = c.count(200); i < n; ++i) {
          const auto p = random_euclid(3, c.rng);
          const auto q = random_euclid(3, c.rng);
          const auto r = random_euclid(3, c.rng);
          const Circle circ = circle_through(p, q, r);
          const auto pts = circ.sample(6, uniform(c.rng, 0.0, kTwoPi));
          w.offer(circle_residual(euclidean_metric(3), pts),
                  [&] { return json{{"through", {point_to_json(p), point_to_json(q), point_to_json(r)}}}; });
        }
        return w;
      });

  add("eq:PT_eq/r-circles", "eq:PT_eq", SuiteGroup::ClosedForm, 1e-9,
      "Ptolemy equality on R-circles obtained by inverting horizontal lines of the Heisenberg group.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(100); i < n; ++i) {
          const auto g = random_element(c.rng, m.complex_dim());
          const auto zeta = m.to_complex(random_unit(m.base_dim(), c.rng));
          const auto pole = random_point(m, c.rng);
          const double r = std::exp(0.5 * gaussian(c.rng));
          const Line l = m.horizontal_line(g, zeta);
          const ClosedCurve sigma = m.r_circle_from_line(l, m.space_inversion(pole, ExtendedPoint::infinity(), r));
          const auto pts = sigma.sample(8);
          w.offer(circle_residual(m.metric(), pts),
                  [&] { return json{{"line_through", element_json(m, g)}, {"pole", point_to_json(pole)}, {"r", r}}; });
        }
        return w;
      });

  auto scan_suite = [](Ctx& c, const MetricEvaluator& d, PointSampler sampler, std::size_t fallback) {
    const std::size_t n = c.count(fallback);
    const auto rep = ptolemy_scan(d, sampler, n, c.rng(), 1e-12, 1);
    Outcome o;
    o.residual = std::max(0.0, -rep.min_slack);
    o.n = rep.n;
    o.witness = json{{"quadruple", quadruple_to_json(rep.worst)}, {"min_slack", rep.min_slack}};
    return o;
  };

  add("ptolemy:euclidean-scan", "subsect:Ptolemy_spaces", SuiteGroup::Exact, 1e-12,
      "Cross-ratio triples of random quadruples in R^3 satisfy the triangle inequality.",
      [scan_suite](Ctx& c) {
        return scan_suite(c, euclidean_metric(3), [](Rng& r) { return random_euclid(3, r); }, 100000);
      });

  add("ptolemy:koranyi-scan", "pro:rank_one_basic_axioms", SuiteGroup::Exact, 1e-12,
      "Cross-ratio triples of random quadruples of the Heisenberg group satisfy the triangle inequality.",
      [scan_suite, heis](Ctx& c) {
        const auto m = heis(c);
        return scan_suite(c, m.metric(), [m](Rng& r) { return random_point(m, r); }, 100000);
      });

  add("negative:L1-not-ptolemy", "subsect:Ptolemy_spaces", SuiteGroup::Negative, 0.0,
      "The L1 metric on R^2 is not Ptolemy: a random search must find a violating quadruple.",
      [](Ctx& c) -> Outcome {
        const std::size_t n = c.count(10000);
        const auto rep = ptolemy_scan(manhattan_metric(2), [](Rng& r) { return random_euclid(2, r); }, n, c.rng(), 1e-12, 1);
        Outcome o;
        o.residual = rep.violations > 0 ? 0.0 : 1.0;
        o.n = rep.n;
        o.witness = json{{"quadruple", quadruple_to_json(rep.worst)}, {"min_slack", rep.min_slack},
                         {"violations", rep.violations}};
        return o;
      });

  // --- Moebius maps ---------------------------------------------------------

  const char* moebius_anchor = "subsect:model_moebius_structure";
  add("moebius:translation", moebius_anchor, SuiteGroup::ClosedForm, 1e-9,
      "Left translations preserve cross-ratio triples.", [heis](Ctx& c) {
        const auto m = heis(c);
        return moebius_suite(c, m, m.left_translation(random_element(c.rng, m.complex_dim())));
      });
  add("moebius:dilation", moebius_anchor, SuiteGroup::ClosedForm, 1e-9,
      "Dilations (z,h) -> (lz, l^2 h) preserve cross-ratio triples.", [heis](Ctx& c) {
        const auto m = heis(c);
        return moebius_suite(c, m, m.dilation(std::exp(gaussian(c.rng))));
      });
  add("moebius:unitary", moebius_anchor, SuiteGroup::ClosedForm, 1e-9,
      "Unitary rotations of the base preserve cross-ratio triples.", [heis](Ctx& c) {
        const auto m = heis(c);
        return moebius_suite(c, m, m.rotation(Unitary::random(m.complex_dim(), c.rng)));
      });
  add("moebius:conj_flip", moebius_anchor, SuiteGroup::ClosedForm, 1e-9,
      "The vertical flip preserves cross-ratio triples.", [heis](Ctx& c) {
        const auto m = heis(c);
        return moebius_suite(c, m, m.conj_flip());
      });
  add("moebius:koranyi_inversion", moebius_anchor, SuiteGroup::ClosedForm, 1e-9,
      "The Koranyi inversion preserves cross-ratio triples.", [heis](Ctx& c) {
        const auto m = heis(c);
        return moebius_suite(c, m, m.koranyi_inversion());
      });
  add("moebius:space_inversion", moebius_anchor, SuiteGroup::ClosedForm, 1e-9,
      "A space inversion swapping two finite points preserves cross-ratio triples.", [heis](Ctx& c) {
        const auto m = heis(c);
        const auto a = random_point(m, c.rng);
        const auto b = random_point(m, c.rng);
        return moebius_suite(c, m, m.space_inversion(a, b, std::exp(0.5 * gaussian(c.rng))));
      });
  add("moebius:chordal-euclidean", "subsect:Ptolemy_spaces", SuiteGroup::ClosedForm, 1e-9,
      "The chordal and Euclidean metrics on R^3 have the same cross-ratio triples.",
      [](Ctx& c) -> Outcome {
        const auto e = euclidean_metric(3);
        const auto ch = chordal_metric(3);
        Worst w;
        for (std::size_t i = 0, n = c.count(1000); i < n; ++i) {
          const auto q = random_quadruple([](Rng& r) { return random_euclid(3, r); }, c.rng, true, i);
          w.offer(cross_ratio(e, q).distance(cross_ratio(ch, q)), [&] { return json{{"quadruple", quadruple_to_json(q)}}; });
        }
        return w;
      });

  // --- inversions -----------------------------------------------------------

  add("lem:sinversion_minversion", "lem:sinversion_minversion", SuiteGroup::ClosedForm, 1e-10,
      "The Koranyi inversion \"induces the m-inversion of d\": pulling the gauge metric back by it "
      "gives m_invert(d, o, 1), and it is an involution.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const auto iota = m.koranyi_inversion();
        const auto o = m.encode(heis_identity(m.complex_dim()));
        const auto pulled = pullback(m.metric(), iota);
        const auto minv = m_invert(m.metric(), o, 1.0);
        Worst w;
        for (std::size_t i = 0, n = c.count(10000); i < n; ++i) {
          const auto x = random_point(m, c.rng);
          const auto y = random_point(m, c.rng);
          const double r = std::max(rel(pulled(x, y), minv(x, y)), scaled_gap(iota(iota(x)), x));
          w.offer(r, [&] { return json{{"x", point_to_json(x)}, {"y", point_to_json(y)}}; });
        }
        return w;
      });

  add("lem:sphere_sinversion", "lem:sphere_sinversion", SuiteGroup::ClosedForm, 1e-10,
      "A space inversion about a sphere of radius r around w maps the sphere of radius r' to the "
      "sphere of radius r^2/r', and swaps its two poles.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(10000); i < n; ++i) {
          const auto omega = random_point(m, c.rng);
          const double r = std::exp(0.5 * gaussian(c.rng));
          const auto f = m.space_inversion(omega, ExtendedPoint::infinity(), r);
          const auto x = random_point(m, c.rng);
          const double rp = m.koranyi_dist(x, omega);
          double res = rel(m.koranyi_dist(f(x), omega), r * r / rp);
          if (i % 16 == 0) {
            const auto omega2 = random_point(m, c.rng);
            const auto g = m.space_inversion(omega, omega2, r);
            res = std::max({res, scaled_gap(g(omega), omega2), scaled_gap(g(omega2), omega)});
          }
          w.offer(res, [&] { return json{{"omega", point_to_json(omega)}, {"r", r}, {"x", point_to_json(x)}}; });
        }
        return w;
      });

  // --- distance function ----------------------------------------------------

  add("prop:comp_dist_function", "pro:comp_dist_function", SuiteGroup::ClosedForm, 1e-9,
      "\"D(a,b)^4 = a^4 + b^4\" for the base and fiber components of the distance.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const std::size_t n = c.count(10000);
        std::vector<std::pair<ExtendedPoint, ExtendedPoint>> pairs;
        pairs.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(random_point(m, c.rng), random_point(m, c.rng));
        Worst w;
        for (const auto& p : pairs) {
          const std::pair<ExtendedPoint, ExtendedPoint> one[1] = {p};
          w.offer(d_law_residual(m, one), [&] { return json{{"x", point_to_json(p.first)}, {"y", point_to_json(p.second)}}; });
        }
        return w;
      });

  add("lem:homogeneous_dist_function", "lem:homogeneous_dist_function", SuiteGroup::ClosedForm, 1e-9,
      "\"D(la, lb) = l D(a, b)\": dilating both points scales both distance components.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(1000); i < n; ++i) {
          const auto x = random_point(m, c.rng);
          const auto y = random_point(m, c.rng);
          const double l = std::exp(gaussian(c.rng));
          const auto dl = m.dilation(l);
          const auto a = dist_components(m, x, y);
          const auto b = dist_components(m, dl(x), dl(y));
          const double r = std::max({rel(b.a, l * a.a), rel(b.b, l * a.b),
                                     rel(m.koranyi_dist(dl(x), dl(y)), l * m.koranyi_dist(x, y))});
          w.offer(r, [&] { return json{{"x", point_to_json(x)}, {"y", point_to_json(y)}, {"lambda", l}}; });
        }
        return w;
      });

  add("prop:base_metric", "pro:base_metric", SuiteGroup::ClosedForm, 1e-9,
      "The projection to the base \"is a 1-Lipschitz submetry\": |pi(x)pi(y)| <= |xy| with "
      "equality along horizontal lines.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(10000); i < n; ++i) {
          const auto x = random_point(m, c.rng);
          const auto y = random_point(m, c.rng);
          const double d = m.koranyi_dist(x, y);
          const double b = vec::dist(m.project(x), m.project(y));
          double r = std::max(0.0, b - d) / d;
          const auto l = m.line(x, random_unit(m.base_dim(), c.rng));
          const double s = gaussian(c.rng);
          r = std::max(r, rel(vec::dist(m.project(l(s)), m.project(x)), std::abs(s)));
          w.offer(r, [&] { return json{{"x", point_to_json(x)}, {"y", point_to_json(y)}}; });
        }
        return w;
      });

  add("cor:3c_4c", "cor:3c_4c", SuiteGroup::ClosedForm, 1e-9,
      "\"There is a unique C-circle\" through two points: the constructed curve passes through both "
      "and does not depend on their order.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(200); i < n; ++i) {
          const auto p = random_point(m, c.rng);
          const auto q = random_point(m, c.rng);
          const auto cc = m.c_circle_through(p, q);
          const auto psi = m.space_inversion(q, ExtendedPoint::infinity(), 1.0);
          const auto hp = m.decode(psi(p)).h;
          // p is the image of the fiber point at height hp.
          double r = std::max(scaled_gap(cc.curve(0.0), q), scaled_gap(psi(m.encode({cc.base, hp})), p));
          const auto other = m.c_circle_through(q, p);
          for (const auto& x : other.curve.sample(16)) {
            if (x == q) continue;
            const auto z = m.decode(psi(x)).z;
            for (std::size_t j = 0; j < z.size(); ++j) r = std::max(r, std::abs(z[j] - cc.base[j]) / (1.0 + std::abs(cc.base[j])));
          }
          w.offer(r, [&] { return json{{"p", point_to_json(p)}, {"q", point_to_json(q)}}; });
        }
        return w;
      });

  add("negative:c-circle-not-ptolemy", "lem:C-circles", SuiteGroup::Negative, 0.0,
      "C-circles are not Ptolemy circles: the Ptolemy equality must fail on every sampled one.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(50); i < n; ++i) {
          const auto p = random_point(m, c.rng);
          const auto q = random_point(m, c.rng);
          const double res = circle_residual(m.metric(), m.c_circle_through(p, q).curve.sample(16));
          w.offer(res > 1e-3 ? 0.0 : 1.0, [&] { return json{{"p", point_to_json(p)}, {"q", point_to_json(q)}, {"ptolemy_residual", res}}; });
        }
        return w;
      });

  // --- lifting --------------------------------------------------------------

  auto random_rectangles = [](Rng& rng, std::size_t dim, std::size_t count) {
    std::vector<Rectangle> rs;
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> corner(dim);
      for (auto& x : corner) x = gaussian(rng);
      rs.push_back({corner, uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 2.0)});
    }
    return rs;
  };

  add("prop:lift_const_2", "pro:lift_const_2", SuiteGroup::Limit, 1e-6,
      "\"Then c=2\": the area law constant of a complex line fitted over random rectangles.",
      [heis, random_rectangles](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (int rep = 0; rep < 4; ++rep) {
          const auto u = random_unit(m.base_dim(), c.rng);
          const auto v = times_i(u);
          const auto rs = random_rectangles(c.rng, m.base_dim(), std::max<std::size_t>(c.count(24), 20));
          const auto fit = area_law_fit(m, u, v, rs);
          w.offer(std::abs(fit.c - 2.0), [&] { return json{{"u", vector_json(u)}, {"c", fit.c}}; });
          w.count(rs.size() - 1);
        }
        return w;
      });

  add("eq:area_law", "eq:area_law", SuiteGroup::ClosedForm, 1e-9,
      "\"delta(P)^2 = c^2 area P\" in random base planes: largest relative misfit of the "
      "through-origin fit.",
      [heis, random_rectangles](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (int rep = 0; rep < 4; ++rep) {
          const auto u = random_unit(m.base_dim(), c.rng);
          auto v = random_unit(m.base_dim(), c.rng);
          v = vec::normalized(vec::axpy(v, -vec::dot(v, u), u));
          const auto rs = random_rectangles(c.rng, m.base_dim(), std::max<std::size_t>(c.count(24), 20));
          const auto fit = area_law_fit(m, u, v, rs);
          for (std::size_t i = 0; i < rs.size(); ++i) {
            const double area = rs[i].width * rs[i].height;
            w.offer(std::abs(fit.residuals[i]) / area, [&] { return json{{"u", vector_json(u)}, {"v", vector_json(v)}, {"c", fit.c}}; });
          }
        }
        return w;
      });

  add("negative:totally-real-area-law", "eq:area_law", SuiteGroup::Negative, 1e-6,
      "A totally real plane has area law constant 0, far below the complex value 2 (k >= 3).",
      [random_rectangles](Ctx& c) -> Outcome {
        const HeisenbergModel m(std::max(c.cfg.k, 3));
        Worst w;
        for (int rep = 0; rep < 4; ++rep) {
          const auto u = random_unit(m.base_dim(), c.rng);
          const auto v = real_orthogonal(u, c.rng);
          const auto rs = random_rectangles(c.rng, m.base_dim(), std::max<std::size_t>(c.count(24), 20));
          const auto fit = area_law_fit(m, u, v, rs);
          w.offer(fit.c, [&] { return json{{"u", vector_json(u)}, {"v", vector_json(v)}, {"c", fit.c}}; });
          w.count(rs.size() - 1);
        }
        return w;
      });

  add("lem:adding_lifts", "lem:adding_lifts", SuiteGroup::ClosedForm, 1e-9,
      "Lifting isometries compose: the fiber shift of a rectangle is the sum over the two halves of a split.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(200); i < n; ++i) {
          const auto u = random_unit(m.base_dim(), c.rng);
          auto v = random_unit(m.base_dim(), c.rng);
          v = vec::normalized(vec::axpy(v, -vec::dot(v, u), u));
          const auto o = random_unit(m.base_dim(), c.rng);
          const double a = uniform(c.rng, 0.2, 2.0);
          const double b = uniform(c.rng, 0.2, 2.0);
          const double split = uniform(c.rng, 0.1, 0.9) * a;
          auto pt = [&](double s, double t) { return vec::axpy(vec::axpy(o, s, u), t, v); };
          const BasePolygon whole{{pt(0, 0), pt(a, 0), pt(a, b), pt(0, b)}, 1, 0};
          const BasePolygon left{{pt(0, 0), pt(split, 0), pt(split, b), pt(0, b)}, 1, 0};
          const BasePolygon right{{pt(split, 0), pt(a, 0), pt(a, b), pt(split, b)}, 1, 0};
          const double h0 = gaussian(c.rng);
          const auto sw = lift_polygon(m, whole, m.fiber_point(pt(0, 0), h0)).fiber_shift;
          const auto sl = lift_polygon(m, left, m.fiber_point(pt(0, 0), h0)).fiber_shift;
          const auto sr = lift_polygon(m, right, m.fiber_point(pt(split, 0), -h0)).fiber_shift;
          w.offer(std::abs(sw - sl - sr) / (1.0 + std::abs(sw)),
                  [&] { return json{{"u", vector_json(u)}, {"v", vector_json(v)}, {"a", a}, {"b", b}, {"split", split}}; });
        }
        return w;
      });

  add("lem:coord_lift_triangle", "lem:coord_lift_triangle", SuiteGroup::ClosedForm, 1e-9,
      "The lift of the triangle 0, z, z' shifts fibers by (c^2/8) <Jz, z'> with c = 2.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        const std::vector<double> zero(m.base_dim(), 0.0);
        for (std::size_t i = 0, n = c.count(1000); i < n; ++i) {
          std::vector<double> z(m.base_dim()), zp(m.base_dim());
          for (auto& x : z) x = gaussian(c.rng);
          for (auto& x : zp) x = gaussian(c.rng);
          const BasePolygon tri{{zero, z, zp}, 1, 0};
          const double shift = lift_polygon(m, tri, m.fiber_point(zero, gaussian(c.rng))).fiber_shift;
          const double expect = 0.5 * vec::dot(times_i(z), zp);
          w.offer(std::abs(shift - expect) / (1.0 + std::abs(expect)),
                  [&] { return json{{"z", vector_json(z)}, {"z_prime", vector_json(zp)}, {"shift", shift}}; });
        }
        return w;
      });

  // --- xi and J -------------------------------------------------------------

  add("lem:xi_norm", "lem:xi_norm", SuiteGroup::Limit, 1e-4,
      "|xi_u| = c^2 = 4: the maximum of xi_u over unit vectors orthogonal to u, found by search.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(3); i < n; ++i) {
          const auto u = random_unit(m.base_dim(), c.rng);
          const auto j = recover_J(m, u);
          const double r = std::max(std::abs(j.value - 4.0), std::abs(xi(m, u, times_i(u)) - 4.0));
          w.offer(r, [&] { return json{{"u", vector_json(u)}, {"value", j.value}}; });
        }
        return w;
      });

  add("prop:complex_structure", "pro:complex_structure", SuiteGroup::Limit, 1e-4,
      "The maximizer of xi_u is J u = i u, and J^2 = -id (angular errors, radians).",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(3); i < n; ++i) {
          const auto u = random_unit(m.base_dim(), c.rng);
          const auto j = recover_J(m, u);
          const auto jj = recover_J(m, j.direction);
          const auto iu = times_i(u);
          const double a1 = std::acos(std::clamp(vec::dot(j.direction, iu), -1.0, 1.0));
          const double a2 = std::acos(std::clamp(-vec::dot(jj.direction, u), -1.0, 1.0));
          w.offer(std::max(a1, a2), [&] { return json{{"u", vector_json(u)}, {"J_u", vector_json(j.direction)}}; });
        }
        return w;
      });

  // --- Busemann functions and slopes ------------------------------------------

  auto random_line = [](const HeisenbergModel& m, Rng& rng) {
    return OrientedLine{random_point(m, rng), random_unit(m.base_dim(), rng)};
  };

  add("eq:busemann_flat", "eq:busemann_flat", SuiteGroup::Limit, 1e-5,
      "\"b+ + b- = const\": opposite Busemann functions of a line sum to zero when normalized on it.",
      [heis, random_line](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (int rep = 0; rep < 4; ++rep) {
          const auto ol = random_line(m, c.rng);
          const auto l = make_line(m, ol);
          std::vector<ExtendedPoint> xs;
          for (std::size_t i = 0, n = c.count(100); i < n; ++i) xs.push_back(random_point(m, c.rng));
          w.offer(busemann_flat_residual(m, l, xs), [&] { return json{{"through", point_to_json(ol.through)}, {"direction", vector_json(ol.direction)}}; });
          w.count(xs.size() - 1);
        }
        return w;
      });

  add("eq:duality", "eq:duality", SuiteGroup::Limit, 1e-4,
      "\"b(x) = d/dt ln d'(x, c(t)) at t = 0\": Busemann functions against one-sided log-derivatives "
      "of the inverted metric.",
      [heis, random_line](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(20); i < n; ++i) {
          const auto ol = random_line(m, c.rng);
          const auto x = random_point(m, c.rng);
          const auto d = duality_residual(m, make_line(m, ol), x);
          w.offer(d.residual, [&] { return json{{"through", point_to_json(ol.through)}, {"direction", vector_json(ol.direction)}, {"x", point_to_json(x)}}; });
        }
        return w;
      });

  add("lem:slope_symmetry", "lem:slope_symmetry", SuiteGroup::Limit, 2e-3,
      "\"slope(l';l) = slope(l;l')\" for random pairs of lines through a common point.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(50); i < n; ++i) {
          const auto x = random_point(m, c.rng);
          const auto a = random_unit(m.base_dim(), c.rng);
          const auto b = random_unit(m.base_dim(), c.rng);
          w.offer(slope_symmetry_residual(m, m.line(x, a), m.line(x, b)),
                  [&] { return json{{"x", point_to_json(x)}, {"l", vector_json(a)}, {"l_prime", vector_json(b)}}; });
        }
        return w;
      });

  add("subsect:slope", "subsect:slope", SuiteGroup::Limit, 1e-6,
      "slope(l,l) = -1, and for lines through a common point the slope is -<l', l> of the base directions.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(20); i < n; ++i) {
          const auto x = random_point(m, c.rng);
          const auto a = random_unit(m.base_dim(), c.rng);
          const auto b = random_unit(m.base_dim(), c.rng);
          const auto la = m.line(x, a);
          const double r = std::max(std::abs(slope_estimate(m, la, la).alpha + 1.0),
                                    std::abs(slope_estimate(m, m.line(x, b), la).alpha + vec::dot(a, b)));
          w.offer(r, [&] { return json{{"x", point_to_json(x)}, {"l", vector_json(a)}, {"l_prime", vector_json(b)}}; });
        }
        return w;
      });

  add("prop:busemann_affine", "pro:busemann_affine", SuiteGroup::Limit, 1e-5,
      "Busemann functions are affine along every Ptolemy line (residual of the affine fit).",
      [heis, random_line](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(20); i < n; ++i) {
          const auto a = random_line(m, c.rng);
          const auto b = random_line(m, c.rng);
          const auto fit = slope_estimate(m, make_line(m, b), make_line(m, a));
          w.offer(fit.affinity_residual, [&] { return json{{"l_through", point_to_json(a.through)}, {"l_prime_through", point_to_json(b.through)}}; });
        }
        return w;
      });

  // --- zigzags --------------------------------------------------------------

  add("lem:busemann_affine_zigzag", "lem:busemann_affine_zigzag", SuiteGroup::Limit, 1e-3,
      "Busemann functions grow at rate beta = sum a_i s_i / sum s_i along the zigzag; the deviation "
      "is at most the tolerance at the configured depth and halves with one more level.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const auto o = m.encode(heis_identity(m.complex_dim()));
        Worst w;
        for (std::size_t i = 0, n = c.count(3); i < n; ++i) {
          const std::size_t kdir = 2 + i % 2;
          ZigzagSpec z{o, {}, {}, c.cfg.depth};
          for (std::size_t j = 0; j < kdir; ++j) {
            z.directions.push_back(random_unit(m.base_dim(), c.rng));
            z.steps.push_back(uniform(c.rng, 0.2, 1.0));
          }
          const auto ld = random_unit(m.base_dim(), c.rng);
          const auto a = zigzag_busemann_affinity(m, z, ld, 1.0);
          z.depth += 1;
          const auto b = zigzag_busemann_affinity(m, z, ld, 1.0);
          const double r = std::max(a.deviation, std::abs(b.deviation / a.deviation - 0.5));
          w.offer(r, [&] { return json{{"steps", z.steps}, {"deviation", a.deviation}, {"next_deviation", b.deviation}}; });
        }
        return w;
      });

  auto unitary_frame = [](const HeisenbergModel& m, Rng& rng) {
    const Unitary u = Unitary::random(m.complex_dim(), rng);
    std::vector<std::vector<double>> frame;
    for (std::size_t j = 0; j < m.base_dim(); ++j) frame.push_back(m.to_real(u.apply(m.unit_direction(j))));
    return frame;
  };

  add("lem:uspeed_parameter_zigzag", "lem:uspeed_parameter_zigzag", SuiteGroup::Limit, 1e-3,
      "For an orthogonal frame the zigzag limit has speed sqrt(sum s_i^2) / sum s_i.",
      [heis, unitary_frame](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const auto o = m.encode(heis_identity(m.complex_dim()));
        Worst w;
        for (std::size_t i = 0, n = c.count(4); i < n; ++i) {
          const auto frame = unitary_frame(m, c.rng);
          ZigzagSpec z{o, {}, {}, c.cfg.depth};
          double s1 = 0.0, s2 = 0.0;
          const std::size_t kdir = 2 + i % (frame.size() - 1);
          for (std::size_t j = 0; j < kdir; ++j) {
            z.directions.push_back(frame[j]);
            z.steps.push_back(uniform(c.rng, 0.2, 1.0));
            s1 += z.steps.back();
            s2 += z.steps.back() * z.steps.back();
          }
          const double speed = zigzag_endpoint_speed(m, z, 2.0);
          w.offer(std::abs(speed - std::sqrt(s2) / s1), [&] { return json{{"steps", z.steps}, {"speed", speed}}; });
        }
        return w;
      });

  add("lem:max_orthogonal", "lem:max_orthogonal", SuiteGroup::Limit, 1e-3,
      "For a maximal orthogonal frame the slopes of any line satisfy sum a_i^2 = 1.",
      [heis, unitary_frame](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const auto o = m.encode(heis_identity(m.complex_dim()));
        Worst w;
        for (std::size_t i = 0, n = c.count(4); i < n; ++i) {
          const auto frame = unitary_frame(m, c.rng);
          const auto ld = random_unit(m.base_dim(), c.rng);
          const auto orth = orthogonalize(m, o, frame, ld);
          w.offer(std::abs(orth.sum_sq - 1.0), [&] { return json{{"l", vector_json(ld)}, {"sum_sq", orth.sum_sq}}; });
        }
        return w;
      });

  add("lem:orthogonalization_procedure", "lem:orthogonalization_procedure", SuiteGroup::Limit, 1e-5,
      "With s_i = a_i/(1+a) the zigzag through a partial frame and l is orthogonal to every frame line.",
      [heis, unitary_frame](Ctx& c) -> Outcome {
        const auto m = heis(c);
        const auto o = m.encode(heis_identity(m.complex_dim()));
        Worst w;
        for (std::size_t i = 0, n = c.count(3); i < n; ++i) {
          auto frame = unitary_frame(m, c.rng);
          frame.resize(frame.size() - 1);
          const auto ld = random_unit(m.base_dim(), c.rng);
          const auto orth = orthogonalize(m, o, frame, ld);
          ZigzagSpec z{o, orth.directions, orth.steps, std::min(c.cfg.depth, 10)};
          for (std::size_t j = 0; j < frame.size(); ++j) {
            const double beta = zigzag_busemann_affinity(m, z, orth.directions[j], 0.5).beta;
            w.offer(std::abs(beta), [&] { return json{{"l", vector_json(ld)}, {"frame_line", j}, {"beta", beta}}; });
          }
        }
        return w;
      });

  // --- R-circles ------------------------------------------------------------

  auto circle_suite = [heis](std::function<double(const CircleReport&, const PlacedCircle&)> pick) {
    return [heis, pick](Ctx& c) -> Outcome {
      const auto m = heis(c);
      Worst w;
      for (const auto& pc : placed_circles(m, c.rng, c.count(4))) {
        const auto rep = circle_diagnostics(m, pc.sigma, pc.center_base);
        w.offer(pick(rep, pc), [&] { return pc.description; });
      }
      return w;
    };
  };

  add("lem:mean_geometric", "lem:mean_geometric", SuiteGroup::ClosedForm, 1e-8,
      "|xz||zy| = |zu|^2 for z between the fiber points x, y of an R-circle and u on the circle.",
      circle_suite([](const CircleReport& r, const PlacedCircle&) { return r.mean_geometric; }));
  add("prop:unit_rcircle", "pro:unit_rcircle", SuiteGroup::ClosedForm, 1e-9,
      "\"|zw| = 1 for every w\" on the circle, scaled: every point is at distance R from the center z.",
      circle_suite([](const CircleReport& r, const PlacedCircle& pc) {
        return std::max(r.unit_radius, std::abs(r.radius - pc.radius)) / pc.radius;
      }));
  add("lem:equal_distances", "lem:equal_distances", SuiteGroup::ClosedForm, 1e-9,
      "\"|uz| = |zv|\": the points of the circle symmetric about the center are equidistant from it.",
      circle_suite([](const CircleReport& r, const PlacedCircle& pc) { return r.equal_distances / pc.radius; }));
  add("cor:circle_cover_twice", "cor:circle_cover_twice", SuiteGroup::Negative, 0.0,
      "The projection of the circle onto its central C-line covers the segment between x and y "
      "twice, monotonically on each arc (1 if monotonicity fails).",
      circle_suite([](const CircleReport& r, const PlacedCircle&) { return r.two_sheets ? 0.0 : 1.0; }));
  add("lem:circle_rectifiable", "lem:circle_rectifiable", SuiteGroup::Limit, 0.0,
      "\"L(xx') = |xx'| + o(|xx'|^2)\": the fitted exponent of arc excess is at least 2.5 "
      "(residual is the shortfall).",
      circle_suite([](const CircleReport& r, const PlacedCircle&) { return std::max(0.0, 2.5 - r.rectifiability_exponent); }));

  add("eq:PT_eq/placed-r-circles", "eq:PT_eq", SuiteGroup::ClosedForm, 1e-9,
      "Ptolemy equality on translated, rotated and scaled copies of the unit R-circle.",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (const auto& pc : placed_circles(m, c.rng, c.count(16)))
          w.offer(circle_residual(m.metric(), pc.sigma.sample(12)), [&] { return pc.description; });
        return w;
      });

  add("eq:quadratic_reduce", "eq:quadratic_reduce", SuiteGroup::Limit, 1e-6,
      "\"b+(x_t) + b-(y_t) <= 2at - (1/a)(1-a^2)t^2\" along a circle meeting a line in x and y "
      "(residual is the worst violation).",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (const auto& pc : placed_circles(m, c.rng, c.count(3))) {
          const auto q = quadratic_excess_check(m, pc.sigma, pc.axis);
          w.offer(std::max(0.0, -q.margin), [&] {
            json j = pc.description;
            j["margin"] = q.margin;
            j["alpha_x"] = q.alpha_x;
            j["alpha_y"] = q.alpha_y;
            return j;
          });
        }
        return w;
      });

  add("prop:tangent_rcircle", "pro:tangent_rcircle", SuiteGroup::Limit, 0.0,
      "Every Ptolemy circle \"possesses a unique tangent Ptolemy line\": the distance from the circle "
      "to the tangent line decays like step^p with p >= 1.25, while a line turned by 0.3 rad has "
      "p < 1.25 (residual is the larger shortfall).",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (const auto& pc : placed_circles(m, c.rng, c.count(4))) {
          const double s0 = uniform(c.rng, 0.2, kTwoPi - 0.2);
          const auto t = tangent_line(m, pc.sigma, s0);
          OrientedLine turned = t.line;
          const auto jd = times_i(t.line.direction);
          turned.direction = vec::axpy(vec::scale(t.line.direction, std::cos(0.3)), std::sin(0.3), jd);
          const double p_tan = distance_exponent(m, pc.sigma, s0, t.line);
          const double p_turned = distance_exponent(m, pc.sigma, s0, turned);
          w.offer(std::max(std::max(0.0, 1.25 - p_tan), std::max(0.0, p_turned - 1.25)), [&] {
            json j = pc.description;
            j["angle"] = s0;
            j["exponent"] = p_tan;
            j["turned_exponent"] = p_turned;
            return j;
          });
        }
        return w;
      });

  add("lem:complex_line", "lem:complex_line", SuiteGroup::Limit, 1e-3,
      "For a circle centered on a line l meeting it in u, the tangent at u projects to J of the "
      "projection of l (angle in radians, J recovered by search).",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (const auto& pc : placed_circles(m, c.rng, c.count(2))) {
          const auto jl = recover_J(m, pc.axis.direction).direction;
          for (double s : circle_line_crossings(m, pc.sigma, pc.axis)) {
            const auto t = tangent_line(m, pc.sigma, s);
            const double err = angle_between_lines(t.line.direction, jl);
            w.offer(err, [&] {
              json j = pc.description;
              j["angle"] = s;
              return j;
            });
          }
        }
        return w;
      });

  add("lem:mu_distortion", "lem:mu_distortion", SuiteGroup::ClosedForm, 1e-9,
      "\"|mu(u)mu(v)|^2 <= |uv|^2 + delta(T)^2\" for the projection mu onto a C-line F and the base "
      "triangle T of u, F, v (residual is the relative violation).",
      [heis](Ctx& c) -> Outcome {
        const auto m = heis(c);
        Worst w;
        for (std::size_t i = 0, n = c.count(1000); i < n; ++i) {
          const auto gu = random_element(c.rng, m.complex_dim());
          const auto gv = random_element(c.rng, m.complex_dim());
          const auto f = random_element(c.rng, m.complex_dim()).z;
          const auto mu = m.encode(m.mu_project(gu, f));
          const auto mv = m.encode(m.mu_project(gv, f));
          const double lhs = std::pow(m.koranyi_dist(mu, mv), 2);
          const double uv = m.koranyi_dist(m.encode(gu), m.encode(gv));
          const auto bu = m.to_real(gu.z);
          const auto bv = m.to_real(gv.z);
          const auto bf = m.to_real(f);
          const BasePolygon tri{{bu, bf, bv}, 1, 0};
          const double delta = lift_polygon(m, tri, m.encode(gu)).displacement;
          const double rhs = uv * uv + delta * delta;
          w.offer(std::max(0.0, lhs - rhs) / rhs,
                  [&] { return json{{"u", element_json(m, gu)}, {"v", element_json(m, gv)}, {"F", vector_json(bf)}}; });
        }
        return w;
      });

  return s;
}

const std::vector<Suite>& registry() {
  static const std::vector<Suite> r = build_registry();
  return r;
}

const Suite& find_suite(const std::string& tag) {
  for (const auto& s : registry())
    if (s.info.tag == tag) return s;
  throw MoebiusError(ErrorCode::UnknownSuite, "no suite tagged '" + tag + "'");
}

json number_json(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

void SuiteConfig::validate() const {
  if (k < 2 || k > HeisenbergModel::kDefaultMaxK)
    throw MoebiusError(ErrorCode::InvalidArgument, "k must lie in [2, " + std::to_string(HeisenbergModel::kDefaultMaxK) + "]");
  if (depth < 1 || depth > 20) throw MoebiusError(ErrorCode::InvalidArgument, "depth must lie in [1, 20]");
  for (const auto& [tag, tol] : tolerances) {
    find_suite(tag);
    if (!(tol >= 0.0)) throw MoebiusError(ErrorCode::InvalidArgument, "tolerance for '" + tag + "' must be nonnegative");
  }
}

const char* to_string(SuiteGroup g) {
  switch (g) {
    case SuiteGroup::Exact: return "exact";
    case SuiteGroup::ClosedForm: return "closed-form";
    case SuiteGroup::Limit: return "limit";
    case SuiteGroup::Negative: return "negative";
  }
  return "?";
}

json to_json(const SuiteReport& r, bool with_runtime) {
  json j{{"tag", r.tag},
         {"pass", r.pass},
         {"worst_residual", number_json(r.worst_residual)},
         {"tolerance", number_json(r.tolerance)},
         {"n", r.n}};
  if (with_runtime) j["runtime_ms"] = r.runtime_ms;
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

SuiteReport report_from_json(const json& j) {
  SuiteReport r;
  r.tag = j.at("tag").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  r.worst_residual = number_from_json(j.at("worst_residual"));
  r.tolerance = number_from_json(j.at("tolerance"));
  r.n = j.at("n").get<std::size_t>();
  if (j.contains("runtime_ms")) r.runtime_ms = j.at("runtime_ms").get<std::int64_t>();
  if (j.contains("witness")) r.witness = j.at("witness");
  return r;
}

std::vector<SuiteInfo> list_suites() {
  std::vector<SuiteInfo> out;
  for (const auto& s : registry()) out.push_back(s.info);
  return out;
}

SuiteReport run_suite(const std::string& tag, const SuiteConfig& config) {
  const Suite& suite = find_suite(tag);
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  SuiteReport rep;
  rep.tag = tag;
  const auto it = config.tolerances.find(tag);
  rep.tolerance = it != config.tolerances.end() ? it->second : suite.info.default_tolerance;
  Ctx ctx{config, make_rng(config.seed, tag)};
  try {
    const Outcome o = suite.run(ctx);
    rep.worst_residual = o.residual;
    rep.n = o.n;
    rep.pass = o.residual <= rep.tolerance;
    if (!rep.pass) rep.witness = o.witness;
  } catch (const std::exception& e) {
    rep.worst_residual = kInf;
    rep.pass = false;
    rep.witness = json{{"error", e.what()}};
  }
  rep.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

RunSummary run_all(const SuiteConfig& config, const std::vector<std::string>& tags, unsigned threads) {
  config.validate();
  std::vector<std::string> todo;
  if (tags.empty()) {
    for (const auto& s : registry()) todo.push_back(s.info.tag);
  } else {
    for (const auto& t : tags) todo.push_back(find_suite(t).info.tag);
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));

  RunSummary out;
  out.reports.resize(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) out.reports[i] = run_suite(todo[i], config);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& r : out.reports) (r.pass ? out.passed : out.failed)++;
  return out;
}

json to_json(const RunSummary& s, const SuiteConfig& config, bool with_runtime) {
  json suites = json::array();
  for (const auto& r : s.reports) suites.push_back(to_json(r, with_runtime));
  json tol = json::object();
  for (const auto& [k, v] : config.tolerances) tol[k] = number_json(v);
  return json{{"config", {{"seed", config.seed}, {"k", config.k}, {"samples", config.samples},
                          {"depth", config.depth}, {"tolerances", tol}}},
              {"passed", s.passed},
              {"failed", s.failed},
              {"suites", suites}};
}

}  // namespace moebius
