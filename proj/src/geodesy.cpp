#include "moebius/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "moebius/vec.hpp"

namespace moebius {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kBrentBits = std::numeric_limits<double>::digits / 2;

/// Polynomial through (h_i, f_i) evaluated at h = 0.
double neville_at_zero(std::span<const double> h, std::span<const double> f) {
  std::vector<double> p(f.begin(), f.end());
  const std::size_t n = p.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m]);
    }
  }
  return p[0];
}

/// Value extrapolated from the last order+1 samples and its difference to the
/// extrapolation of one order less.
std::pair<double, double> extrapolate(std::span<const double> h, std::span<const double> f,
                                      int order) {
  const std::size_t n = static_cast<std::size_t>(order) + 1;
  const auto hi = h.last(n);
  const auto fi = f.last(n);
  const double best = neville_at_zero(hi, fi);
  const double lower = neville_at_zero(hi.last(n - 1), fi.last(n - 1));
  return {best, std::abs(best - lower)};
}

double brent_max(const std::function<double(double)>& f, double lo, double hi, double* at) {
  auto [x, v] = boost::math::tools::brent_find_minima([&](double s) { return -f(s); }, lo, hi,
                                                      kBrentBits);
  if (at) *at = x;
  return -v;
}

/// Root of f in [lo, hi] given a sign change.
double bisect_root(const std::function<double(double)>& f, double lo, double hi) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw MoebiusError(ErrorCode::ParameterizationFailed, "no sign change in bracket");
  }
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol);
  return 0.5 * (a + b);
}

double wrap_angle(double s) {
  double r = std::fmod(s, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

void require_unit(std::span<const double> u, const char* what) {
  if (std::abs(vec::norm(u) - 1.0) > 1e-12) {
    throw MoebiusError(ErrorCode::NonUnitDirection, std::string(what) + " must be a unit vector");
  }
}

std::vector<double> base_of(const LineModel& model, const ClosedCurve& sigma, double s) {
  const auto p = sigma(s);
  if (p.is_infinity()) {
    throw MoebiusError(ErrorCode::ParameterizationFailed, "curve passes through the remote point");
  }
  return model.project(p);
}

/// Angles in [0, 2π) where the vector-valued residual r(s) vanishes. Local
/// minima of |r| on a uniform scan are refined by bisection on the component
/// of r along its own secant, then accepted when |r| <= accept.
std::vector<double> find_vanishing(const std::function<std::vector<double>(double)>& r,
                                   std::size_t scan, double accept) {
  std::vector<double> norms(scan);
  const double ds = kTwoPi / static_cast<double>(scan);
  for (std::size_t j = 0; j < scan; ++j) norms[j] = vec::norm(r(ds * static_cast<double>(j)));

  std::vector<double> roots;
  for (std::size_t j = 0; j < scan; ++j) {
    const double prev = norms[(j + scan - 1) % scan];
    const double next = norms[(j + 1) % scan];
    if (!(norms[j] <= prev && norms[j] < next)) continue;
    const double lo = ds * (static_cast<double>(j) - 1.0);
    const double hi = ds * (static_cast<double>(j) + 1.0);
    const auto tangent = vec::sub(r(hi), r(lo));
    auto along = [&](double s) { return vec::dot(r(s), tangent); };
    double root;
    try {
      root = bisect_root(along, lo, hi);
    } catch (const MoebiusError&) {
      continue;
    }
    if (vec::norm(r(root)) > accept) continue;
    root = wrap_angle(root);
    const bool dup = std::any_of(roots.begin(), roots.end(), [&](double q) {
      const double d = std::abs(q - root);
      return std::min(d, kTwoPi - d) < 2.0 * ds;
    });
    if (!dup) roots.push_back(root);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

// ---------------------------------------------------------------------------
// Busemann functions

void BusemannScheme::validate() const {
  if (t_values.size() < 3) {
    throw MoebiusError(ErrorCode::InvalidArgument, "Busemann scheme needs at least three t values");
  }
  for (std::size_t i = 1; i < t_values.size(); ++i) {
    if (!(t_values[i] > t_values[i - 1]) || !(t_values[0] > 0.0)) {
      throw MoebiusError(ErrorCode::InvalidArgument, "t values must be positive and increasing");
    }
  }
  if (extrapolation < 1 || static_cast<std::size_t>(extrapolation) + 1 > t_values.size()) {
    throw MoebiusError(ErrorCode::InvalidArgument, "extrapolation order does not fit the t values");
  }
}

BusemannValue busemann(const LineModel& model, const Line& line, const ExtendedPoint& x,
                       const BusemannScheme& scheme) {
  scheme.validate();
  if (x.is_infinity()) throw MoebiusError(ErrorCode::InvalidArgument, "Busemann function at ∞");
  const auto& d = model.metric();
  std::vector<double> h;
  std::vector<double> f;
  for (double t : scheme.t_values) {
    h.push_back(1.0 / t);
    f.push_back(d(x, line(t)) - t);
  }
  const auto [value, error] = extrapolate(h, f, scheme.extrapolation);
  if (!(error <= scheme.tol)) {
    throw MoebiusError(ErrorCode::NonConvergent,
                       "Busemann extrapolation error " + std::to_string(error) + " exceeds tol");
  }
  return {value, error, f.back()};
}

double busemann_flat_residual(const LineModel& model, const Line& line,
                              std::span<const ExtendedPoint> samples, const BusemannScheme& scheme) {
  const Line back = line.reversed();
  double worst = 0.0;
  for (const auto& x : samples) {
    const double s = busemann(model, line, x, scheme).value + busemann(model, back, x, scheme).value;
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

DualityResult duality_residual(const LineModel& model, const Line& line, const ExtendedPoint& x,
                               double step, const BusemannScheme& scheme) {
  const ExtendedPoint o = line(0.0);
  if (x.is_infinity() || x == o) {
    throw MoebiusError(ErrorCode::InvalidArgument, "x must differ from both ends of the circle");
  }
  const MetricEvaluator dp = m_invert(model.metric(), o, 1.0);
  const double at_zero = std::log(dp(x, ExtendedPoint::infinity()));

  // One-sided difference quotients in h, extrapolated to h = 0.
  auto derivative = [&](double sign, double h0) {
    std::vector<double> hs;
    std::vector<double> qs;
    for (int j = 0; j < 4; ++j) {
      const double h = h0 / std::ldexp(1.0, j);
      hs.push_back(h);
      qs.push_back((std::log(dp(x, line(sign / h))) - at_zero) / (sign * h));
    }
    const double coarse = neville_at_zero(std::span(hs).first(3), std::span(qs).first(3));
    const double fine = neville_at_zero(std::span(hs).last(3), std::span(qs).last(3));
    return std::pair{fine, std::abs(fine - coarse)};
  };

  const auto [right, conv_r] = derivative(1.0, step);
  const auto [left, conv_l] = derivative(-1.0, step);
  const double bp = busemann(model, line, x, scheme).value;
  const double bm = busemann(model, line.reversed(), x, scheme).value;

  DualityResult out;
  out.right_derivative = right;
  out.left_derivative = left;
  out.residual = std::max(std::abs(bp - right), std::abs(bm + left));
  out.convergence = std::max(conv_r, conv_l);
  return out;
}

// ---------------------------------------------------------------------------
// Slopes

SlopeFit slope_estimate(const LineModel& model, const Line& l_prime, const Line& l,
                        const SlopeOptions& options) {
  if (options.samples < 3) throw MoebiusError(ErrorCode::InvalidArgument, "slope needs 3 samples");
  const auto n = static_cast<std::size_t>(options.samples);
  std::vector<double> ts(n);
  std::vector<double> ys(n);
  for (std::size_t j = 0; j < n; ++j) {
    ts[j] = -options.window + 2.0 * options.window * static_cast<double>(j) /
                                  static_cast<double>(n - 1);
    ys[j] = busemann(model, l, l_prime(ts[j]), options.scheme).value;
  }
  double tm = 0.0;
  double ym = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    tm += ts[j];
    ym += ys[j];
  }
  tm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sxy += (ts[j] - tm) * (ys[j] - ym);
    sxx += (ts[j] - tm) * (ts[j] - tm);
  }
  SlopeFit fit;
  fit.alpha = sxy / sxx;
  for (std::size_t j = 0; j < n; ++j) {
    fit.affinity_residual =
        std::max(fit.affinity_residual, std::abs(ys[j] - (ym + fit.alpha * (ts[j] - tm))));
  }
  if (fit.affinity_residual > options.affinity_tol) {
    throw MoebiusError(ErrorCode::NonAffine, "Busemann function is not affine along the line (" +
                                                 std::to_string(fit.affinity_residual) + ")");
  }
  return fit;
}

double slope_symmetry_residual(const LineModel& model, const Line& l, const Line& l_prime,
                               const SlopeOptions& options) {
  return std::abs(slope_estimate(model, l_prime, l, options).alpha -
                  slope_estimate(model, l, l_prime, options).alpha);
}

// ---------------------------------------------------------------------------
// Zigzag curves

OrientedLine OrientedLine::reversed() const { return {through, vec::scale(direction, -1.0)}; }

Line make_line(const LineModel& model, const OrientedLine& l) {
  return model.line(l.through, l.direction);
}

void ZigzagSpec::validate(const LineModel& model) const {
  if (o.is_infinity()) throw MoebiusError(ErrorCode::InvalidArgument, "zigzag start must be finite");
  if (directions.empty() || directions.size() != steps.size()) {
    throw MoebiusError(ErrorCode::InvalidArgument, "need one step length per direction");
  }
  if (depth < 1 || depth > 30) throw MoebiusError(ErrorCode::InvalidArgument, "depth must be in [1, 30]");
  double sum = 0.0;
  for (double s : steps) {
    if (!(s >= 0.0)) throw MoebiusError(ErrorCode::InvalidArgument, "step lengths must be >= 0");
    sum += s;
  }
  if (!(sum > 0.0)) throw MoebiusError(ErrorCode::InvalidArgument, "step lengths sum to zero");
  for (const auto& d : directions) {
    if (d.size() != model.base_dim()) {
      throw MoebiusError(ErrorCode::DimensionMismatch, "direction has the wrong dimension");
    }
    require_unit(d, "zigzag direction");
  }
}

ExtendedPoint Polyline::at(const LineModel& model, double s) const {
  if (t.empty() || s < t.front() || s > t.back()) {
    throw MoebiusError(ErrorCode::InvalidArgument, "parameter outside the polyline");
  }
  if (s == t.back()) return vertices.back();
  const auto it = std::upper_bound(t.begin(), t.end(), s);
  const auto n = static_cast<std::size_t>(it - t.begin()) - 1;
  if (s == t[n]) return vertices[n];
  return model.line(vertices[n], directions[n])(s - t[n]);
}

Polyline zigzag(const LineModel& model, const ZigzagSpec& spec, double t_min, double t_max) {
  spec.validate(model);
  if (!(t_min <= 0.0 && 0.0 <= t_max)) {
    throw MoebiusError(ErrorCode::InvalidArgument, "parameter range must contain 0");
  }
  const double scale = std::ldexp(1.0, 1 - spec.depth);
  const std::size_t k = spec.steps.size();
  std::vector<double> prefix(k + 1, 0.0);
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + spec.steps[i];
  const double cycle = prefix[k];

  // Forward half.
  std::vector<double> ft{0.0};
  std::vector<ExtendedPoint> fv{spec.o};
  std::vector<std::vector<double>> fd;
  for (std::int64_t m = 0; ft.back() < t_max; ++m) {
    for (std::size_t i = 0; i < k && ft.back() < t_max; ++i) {
      if (spec.steps[i] == 0.0) continue;
      fd.push_back(spec.directions[i]);
      fv.push_back(model.line(fv.back(), spec.directions[i])(spec.steps[i] * scale));
      ft.push_back((static_cast<double>(m) * cycle + prefix[i + 1]) * scale);
    }
  }

  // Backward half: reversed lines in reversed order.
  std::vector<double> bt{0.0};
  std::vector<ExtendedPoint> bv{spec.o};
  std::vector<std::vector<double>> bd;
  for (std::int64_t m = 0; bt.back() > t_min; ++m) {
    for (std::size_t i = k; i-- > 0 && bt.back() > t_min;) {
      if (spec.steps[i] == 0.0) continue;
      const auto back = vec::scale(spec.directions[i], -1.0);
      bd.push_back(spec.directions[i]);
      bv.push_back(model.line(bv.back(), back)(spec.steps[i] * scale));
      bt.push_back(-(static_cast<double>(m) * cycle + (cycle - prefix[i])) * scale);
    }
  }

  Polyline out;
  for (std::size_t j = bt.size(); j-- > 1;) {
    out.t.push_back(bt[j]);
    out.vertices.push_back(bv[j]);
    out.directions.push_back(bd[j - 1]);
  }
  out.t.insert(out.t.end(), ft.begin(), ft.end());
  out.vertices.insert(out.vertices.end(), fv.begin(), fv.end());
  out.directions.insert(out.directions.end(), fd.begin(), fd.end());
  return out;
}

ZigzagAffinity zigzag_busemann_affinity(const LineModel& model, const ZigzagSpec& spec,
                                        const std::vector<double>& l_direction, double t_max,
                                        const SlopeOptions& options) {
  spec.validate(model);
  const Line l = model.line(spec.o, l_direction);
  ZigzagAffinity out;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < spec.directions.size(); ++i) {
    const double a = slope_estimate(model, model.line(spec.o, spec.directions[i]), l, options).alpha;
    out.alphas.push_back(a);
    num += a * spec.steps[i];
    den += spec.steps[i];
  }
  out.beta = num / den;
  const Polyline poly = zigzag(model, spec, -t_max, t_max);
  for (std::size_t n = 0; n < poly.t.size(); ++n) {
    const double b = busemann(model, l, poly.vertices[n], options.scheme).value;
    out.deviation = std::max(out.deviation, std::abs(b - out.beta * poly.t[n]));
  }
  return out;
}

double zigzag_endpoint_speed(const LineModel& model, const ZigzagSpec& spec, double t_end) {
  if (t_end == 0.0) throw MoebiusError(ErrorCode::InvalidArgument, "endpoint parameter must be nonzero");
  const Polyline poly = zigzag(model, spec, std::min(t_end, 0.0), std::max(t_end, 0.0));
  return model.metric()(spec.o, poly.at(model, t_end)) / std::abs(t_end);
}

double zigzag_cauchy_gap(const LineModel& model, const ZigzagSpec& spec, double t) {
  ZigzagSpec finer = spec;
  finer.depth = spec.depth + 1;
  const double lo = std::min(t, 0.0);
  const double hi = std::max(t, 0.0);
  const auto a = zigzag(model, spec, lo, hi).at(model, t);
  const auto b = zigzag(model, finer, lo, hi).at(model, t);
  return model.metric()(a, b);
}

Orthogonalization orthogonalize(const LineModel& model, const ExtendedPoint& o,
                                const std::vector<std::vector<double>>& frame,
                                const std::vector<double>& l_direction, double tol,
                                const SlopeOptions& options) {
  auto slope = [&](const std::vector<double>& a, const std::vector<double>& b) {
    try {
      return slope_estimate(model, model.line(o, a), model.line(o, b), options).alpha;
    } catch (const MoebiusError& e) {
      throw MoebiusError(ErrorCode::SlopeEstimationFailed, e.what());
    }
  };
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = i + 1; j < frame.size(); ++j) {
      if (std::abs(slope(frame[i], frame[j])) > tol) {
        throw MoebiusError(ErrorCode::NotOrthogonal, "frame lines are not mutually orthogonal");
      }
    }
  }
  Orthogonalization out;
  double alpha = 0.0;
  for (const auto& f : frame) {
    double a = slope(l_direction, f);
    const bool flip = a < 0.0;
    out.directions.push_back(flip ? vec::scale(f, -1.0) : f);
    out.flipped.push_back(flip);
    a = std::abs(a);
    out.alphas.push_back(a);
    alpha += a;
    out.sum_sq += a * a;
  }
  out.directions.push_back(l_direction);
  for (double a : out.alphas) out.steps.push_back(a / (1.0 + alpha));
  out.steps.push_back(1.0 / (1.0 + alpha));
  out.degenerate = std::abs(out.sum_sq - 1.0) <= tol;
  return out;
}

// ---------------------------------------------------------------------------
// Lifting

LiftResult lift_polygon(const FiberedModel& model, const BasePolygon& polygon,
                        const ExtendedPoint& start) {
  const auto& vs = polygon.vertices;
  if (vs.empty() || polygon.pointed >= vs.size()) {
    throw MoebiusError(ErrorCode::EdgeLiftFailed, "polygon has no pointed vertex");
  }
  if (polygon.orientation != 1 && polygon.orientation != -1) {
    throw MoebiusError(ErrorCode::InvalidArgument, "orientation must be +1 or -1");
  }
  auto base_residual = [&](const ExtendedPoint& p, const std::vector<double>& v) {
    return vec::dist(model.project(p), v) / (1.0 + vec::norm(v));
  };
  const auto& home = vs[polygon.pointed];
  if (base_residual(start, home) > 1e-12) {
    throw MoebiusError(ErrorCode::EdgeLiftFailed, "start does not lie over the pointed vertex");
  }
  const auto n = static_cast<std::ptrdiff_t>(vs.size());
  ExtendedPoint x = start;
  for (std::ptrdiff_t step = 1; step <= n; ++step) {
    const auto idx = ((static_cast<std::ptrdiff_t>(polygon.pointed) + polygon.orientation * step) % n + n) % n;
    const auto& v = vs[static_cast<std::size_t>(idx)];
    x = model.fiber_transfer(x, v);
    if (base_residual(x, v) > 1e-12) {
      throw MoebiusError(ErrorCode::EdgeLiftFailed, "edge lift missed its end vertex");
    }
  }
  LiftResult out;
  out.end = model.fiber_point(home, model.fiber_coordinate(x));
  out.displacement = model.metric()(start, out.end);
  out.fiber_shift = model.fiber_coordinate(out.end) - model.fiber_coordinate(start);
  out.sign = (out.fiber_shift > 0.0) - (out.fiber_shift < 0.0);
  return out;
}

AreaLawFit area_law_fit(const FiberedModel& model, std::span<const double> u,
                        std::span<const double> v, const std::vector<Rectangle>& rectangles) {
  if (rectangles.empty()) throw MoebiusError(ErrorCode::TooFewPoints, "no rectangles to fit");
  const double uu = vec::dot(u, u);
  const double vv = vec::dot(v, v);
  const double uv = vec::dot(u, v);
  const double unit_area = std::sqrt(std::max(uu * vv - uv * uv, 0.0));

  std::vector<double> areas;
  std::vector<double> d2;
  for (const auto& r : rectangles) {
    BasePolygon p;
    p.vertices = {r.corner, vec::axpy(r.corner, r.width, u),
                  vec::axpy(vec::axpy(r.corner, r.width, u), r.height, v),
                  vec::axpy(r.corner, r.height, v)};
    const auto lift = lift_polygon(model, p, model.fiber_point(r.corner, 0.0));
    areas.push_back(std::abs(r.width * r.height) * unit_area);
    d2.push_back(lift.displacement * lift.displacement);
  }
  double sxy = 0.0;
  double sxx = 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    sxy += areas[i] * d2[i];
    sxx += areas[i] * areas[i];
    mean += d2[i];
  }
  mean /= static_cast<double>(areas.size());
  AreaLawFit out;
  const double c2 = sxx > 0.0 ? sxy / sxx : 0.0;
  out.c = std::sqrt(std::max(c2, 0.0));
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < areas.size(); ++i) {
    const double r = d2[i] - c2 * areas[i];
    out.residuals.push_back(r);
    ss_res += r * r;
    ss_tot += (d2[i] - mean) * (d2[i] - mean);
  }
  if (ss_tot > 0.0) {
    out.r_squared = 1.0 - ss_res / ss_tot;
  } else {
    out.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
  }
  out.linear = out.r_squared >= 1.0 - 1e-6;
  return out;
}

double xi(const FiberedModel& model, std::span<const double> u, std::span<const double> v) {
  require_unit(u, "u");
  if (u.size() != v.size() || u.size() != model.base_dim()) {
    throw MoebiusError(ErrorCode::DimensionMismatch, "xi arguments must be base vectors");
  }
  if (std::abs(vec::dot(u, v)) > 1e-12 * std::max(1.0, vec::norm(v))) {
    throw MoebiusError(ErrorCode::NotOrthogonal, "v is not orthogonal to u");
  }
  if (vec::norm(v) == 0.0) return 0.0;
  const std::vector<double> zero(u.size(), 0.0);
  BasePolygon p;
  p.vertices = {zero, {u.begin(), u.end()}, vec::add(u, v), {v.begin(), v.end()}};
  const auto lift = lift_polygon(model, p, model.fiber_point(zero, 0.0));
  return lift.sign * lift.displacement * lift.displacement;
}

JResult recover_J(const FiberedModel& model, std::span<const double> u, const JSearch& search) {
  require_unit(u, "u");
  const std::size_t n = model.base_dim();
  if (u.size() != n) throw MoebiusError(ErrorCode::DimensionMismatch, "u must be a base vector");

  // Orthonormal basis of u^⊥.
  std::vector<std::vector<double>> basis;
  for (std::size_t i = 0; i < n && basis.size() + 1 < n; ++i) {
    std::vector<double> e(n, 0.0);
    e[i] = 1.0;
    e = vec::axpy(e, -vec::dot(e, u), u);
    for (const auto& b : basis) e = vec::axpy(e, -vec::dot(e, b), b);
    if (vec::norm(e) > 1e-8) basis.push_back(vec::normalized(e));
  }
  if (basis.empty()) {
    throw MoebiusError(ErrorCode::MaximizerNotIsolated, "u^⊥ is trivial");
  }

  auto f = [&](std::span<const double> v) {
    // Keep v exactly in u^⊥ despite rounding in the rotations.
    auto w = vec::axpy(v, -vec::dot(v, u), u);
    return xi(model, u, vec::normalized(w));
  };
  auto rotate = [](const std::vector<double>& a, const std::vector<double>& b, double th) {
    return vec::normalized(vec::axpy(vec::scale(a, std::cos(th)), std::sin(th), b));
  };

  std::vector<double> v = basis.front();
  double best = f(v);
  for (const auto& b : basis) {
    for (double sgn : {1.0, -1.0}) {
      const auto c = vec::scale(b, sgn);
      const double val = f(c);
      if (val > best) {
        best = val;
        v = c;
      }
    }
  }

  const double grid = search.grid_degrees * std::numbers::pi / 180.0;
  const auto steps = static_cast<int>(std::lround(kTwoPi / grid));
  for (int round = 0; round < search.max_rounds; ++round) {
    const double before = best;
    for (const auto& b : basis) {
      auto w = vec::axpy(b, -vec::dot(b, v), v);
      if (vec::norm(w) < 1e-12) continue;
      w = vec::normalized(w);
      double th_best = 0.0;
      double val_best = best;
      for (int j = 1; j < steps; ++j) {
        const double th = grid * j;
        const double val = f(rotate(v, w, th));
        if (val > val_best) {
          val_best = val;
          th_best = th;
        }
      }
      double th = th_best;
      const double refined =
          brent_max([&](double t) { return f(rotate(v, w, t)); }, th_best - grid, th_best + grid, &th);
      if (refined > best) {
        best = refined;
        v = rotate(v, w, th);
      }
    }
    if (round > 0 && best - before <= 1e-14 * (1.0 + std::abs(best))) break;
  }
  v = vec::normalized(vec::axpy(v, -vec::dot(v, u), u));
  best = f(v);

  // Isolation: away from v, every sampled direction is clearly worse.
  const double iso = search.isolation_angle_degrees * std::numbers::pi / 180.0;
  for (const auto& b : basis) {
    auto w = vec::axpy(b, -vec::dot(b, v), v);
    if (vec::norm(w) < 1e-12) continue;
    w = vec::normalized(w);
    for (int j = 1; j < steps; ++j) {
      const double th = grid * j;
      if (th <= iso || th >= kTwoPi - iso) continue;
      if (f(rotate(v, w, th)) > best - search.isolation_gap) {
        throw MoebiusError(ErrorCode::MaximizerNotIsolated, "xi_u has no isolated maximizer");
      }
    }
  }
  return {v, best};
}

// ---------------------------------------------------------------------------
// Distance components

DistComponents dist_components(const FiberedModel& model, const ExtendedPoint& x,
                               const ExtendedPoint& y) {
  const auto bx = model.project(x);
  const auto by = model.project(y);
  const auto moved = model.fiber_transfer(x, by);
  return {vec::dist(bx, by), model.metric()(moved, y)};
}

double d_law_residual(const FiberedModel& model,
                      std::span<const std::pair<ExtendedPoint, ExtendedPoint>> pairs) {
  double worst = 0.0;
  for (const auto& [x, y] : pairs) {
    const double d = model.metric()(x, y);
    if (d == 0.0) continue;
    const auto [a, b] = dist_components(model, x, y);
    const double d4 = d * d * d * d;
    worst = std::max(worst, std::abs(d4 - (a * a * a * a + b * b * b * b)) / d4);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Circles

double distance_to_line(const LineModel& model, const OrientedLine& l, const ExtendedPoint& p) {
  const Line line = make_line(model, l);
  const auto& d = model.metric();
  const double t0 = vec::dot(vec::sub(model.project(p), model.project(l.through)), l.direction);
  const double r = d(p, line(t0));
  if (r == 0.0) return 0.0;
  double at = t0;
  const double neg = brent_max([&](double t) { return -d(p, line(t)); }, t0 - 2.0 * r, t0 + 2.0 * r, &at);
  return std::min(r, -neg);
}

TangentLine tangent_line(const LineModel& model, const ClosedCurve& sigma, double s0, double tol) {
  const ExtendedPoint p0 = sigma(s0);
  if (p0.is_infinity()) {
    throw MoebiusError(ErrorCode::InvalidArgument, "tangent at the remote point");
  }
  auto secant = [&](double h) {
    return vec::normalized(vec::sub(base_of(model, sigma, s0 + h), base_of(model, sigma, s0 - h)));
  };
  double h = 1e-2;
  auto prev = secant(h);
  TangentLine out;
  bool done = false;
  for (int it = 0; it < 30; ++it) {
    h *= 0.5;
    const auto cur = secant(h);
    // The symmetric secant error is O(h^2); one Richardson step removes it.
    const auto rich = vec::normalized(vec::axpy(vec::scale(cur, 4.0 / 3.0), -1.0 / 3.0, prev));
    out.direction_change = vec::dist(cur, prev);
    prev = cur;
    if (out.direction_change <= tol) {
      out.line = {p0, rich};
      done = true;
      break;
    }
  }
  if (!done) throw MoebiusError(ErrorCode::NonConvergent, "tangent direction did not settle");
  const double hc = 1e-3;
  const auto q = sigma(s0 + hc);
  out.tangency_ratio = distance_to_line(model, out.line, q) / model.metric()(p0, q);
  return out;
}

FiberCrossings circle_fiber_crossings(const FiberedModel& model, const ClosedCurve& sigma,
                                      std::span<const double> base, std::size_t scan) {
  const std::vector<double> b(base.begin(), base.end());
  auto r = [&](double s) { return vec::sub(base_of(model, sigma, s), b); };
  double scale = 0.0;
  for (std::size_t j = 0; j < 64; ++j) {
    scale = std::max(scale, vec::norm(r(kTwoPi * static_cast<double>(j) / 64.0)));
  }
  const auto roots = find_vanishing(r, scan, 1e-9 * (1.0 + scale));
  if (roots.size() != 2) {
    throw MoebiusError(ErrorCode::CircleDoesNotMeetFiberTwice,
                       "circle meets the fiber in " + std::to_string(roots.size()) + " points");
  }
  FiberCrossings out;
  std::array<ExtendedPoint, 2> pts{model.fiber_transfer(sigma(roots[0]), b),
                                   model.fiber_transfer(sigma(roots[1]), b)};
  const bool swap = model.fiber_coordinate(pts[0]) > model.fiber_coordinate(pts[1]);
  out.s_x = roots[swap ? 1 : 0];
  out.s_y = roots[swap ? 0 : 1];
  out.x = pts[swap ? 1 : 0];
  out.y = pts[swap ? 0 : 1];
  return out;
}

CircleReport circle_diagnostics(const FiberedModel& model, const ClosedCurve& sigma,
                                std::span<const double> fiber_base, std::size_t samples) {
  CircleReport rep;
  rep.crossings = circle_fiber_crossings(model, sigma, fiber_base);
  const auto& d = model.metric();
  const std::vector<double> base(fiber_base.begin(), fiber_base.end());
  const auto& cr = rep.crossings;
  const double hx = model.fiber_coordinate(cr.x);
  const double hy = model.fiber_coordinate(cr.y);

  // Arc A runs from x to y in increasing angle, arc B from y back to x.
  const double span_a = wrap_angle(cr.s_y - cr.s_x);
  const double span_b = kTwoPi - span_a;
  auto arc_a = [&](double f) { return cr.s_x + f * span_a; };
  auto arc_b = [&](double f) { return cr.s_y + f * span_b; };
  auto mu_coord = [&](double s) { return model.fiber_coordinate(model.fiber_transfer(sigma(s), base)); };

  // Projection onto F is monotone along each arc.
  const std::size_t dense = 512;
  double prev_a = hx;
  double prev_b = hy;
  for (std::size_t j = 1; j < dense; ++j) {
    const double f = static_cast<double>(j) / static_cast<double>(dense);
    const double ma = mu_coord(arc_a(f));
    const double mb = mu_coord(arc_b(f));
    if (ma < prev_a || mb > prev_b) rep.two_sheets = false;
    prev_a = ma;
    prev_b = mb;
  }

  // Points of each arc projecting to the fiber point at height h.
  auto lift_to = [&](const std::function<double(double)>& arc, double h) {
    return sigma(arc(bisect_root([&](double f) { return mu_coord(arc(f)) - h; }, 0.0, 1.0)));
  };

  const double hm = 0.5 * (hx + hy);
  const auto zm = model.fiber_point(fiber_base, hm);
  rep.radius = d(zm, lift_to(arc_a, hm));

  for (std::size_t j = 1; j <= samples; ++j) {
    const double h = hx + (hy - hx) * static_cast<double>(j) / static_cast<double>(samples + 1);
    const auto z = model.fiber_point(fiber_base, h);
    const auto u1 = lift_to(arc_a, h);
    const auto u2 = lift_to(arc_b, h);
    const double lhs = d(cr.x, z) * d(z, cr.y);
    const double r1 = d(z, u1);
    const double r2 = d(z, u2);
    rep.mean_geometric = std::max({rep.mean_geometric, std::abs(lhs - r1 * r1), std::abs(lhs - r2 * r2)});
    rep.equal_distances = std::max(rep.equal_distances, std::abs(r1 - r2));
  }

  for (std::size_t j = 0; j < dense; ++j) {
    const auto w = sigma(kTwoPi * static_cast<double>(j) / static_cast<double>(dense));
    rep.unit_radius = std::max(rep.unit_radius, std::abs(d(zm, w) - rep.radius));
  }

  // Ordered fiber triples p < q < r between x and y.
  for (std::size_t j = 0; j + 2 < samples; ++j) {
    auto at = [&](std::size_t i) {
      return model.fiber_point(fiber_base, hx + (hy - hx) * static_cast<double>(i * i) /
                                                   static_cast<double>(samples * samples));
    };
    const auto p = at(j);
    const auto q = at(j + 1);
    const auto r = at(samples);
    const double pr = d(p, r);
    const double pq = d(p, q);
    const double qr = d(q, r);
    rep.fiber_pythagoras = std::max(rep.fiber_pythagoras, std::abs(pr * pr - (pq * pq + qr * qr)));
  }

  // Chord-arc excess L - |xx'| against |xx'| on a log-log fit.
  const double s0 = arc_a(0.5);
  const auto p0 = sigma(s0);
  std::vector<double> lx;
  std::vector<double> ly;
  for (int j = 0; j < 5; ++j) {
    const double delta = 0.2 / std::ldexp(1.0, j);
    const std::size_t m = 512;
    double length = 0.0;
    ExtendedPoint prev = p0;
    for (std::size_t i = 1; i <= m; ++i) {
      const auto cur = sigma(s0 + delta * static_cast<double>(i) / static_cast<double>(m));
      length += d(prev, cur);
      prev = cur;
    }
    const double chord = d(p0, prev);
    const double excess = length - chord;
    if (excess > 0.0 && chord > 0.0) {
      lx.push_back(std::log(chord));
      ly.push_back(std::log(excess));
    }
  }
  if (lx.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rep.rectifiability_exponent = sxy / sxx;
  }
  return rep;
}

std::vector<double> circle_line_crossings(const LineModel& model, const ClosedCurve& sigma,
                                          const OrientedLine& l, double accept) {
  require_unit(l.direction, "line direction");
  const auto origin = model.project(l.through);
  // Base component of sigma orthogonal to the base of l.
  auto normal = [&](double s) {
    const auto r = vec::sub(base_of(model, sigma, s), origin);
    return vec::axpy(r, -vec::dot(r, l.direction), l.direction);
  };
  std::vector<double> hits;
  for (double s : find_vanishing(normal, 4096, 1e-9)) {
    if (distance_to_line(model, l, sigma(s)) <= accept) hits.push_back(s);
  }
  return hits;
}

QuadraticExcess quadratic_excess_check(const LineModel& model, const ClosedCurve& sigma,
                                       const OrientedLine& l, std::size_t samples,
                                       double alpha_tol) {
  require_unit(l.direction, "line direction");
  const auto& d = model.metric();
  const auto origin = model.project(l.through);

  const auto hits = circle_line_crossings(model, sigma, l);
  if (hits.size() != 2) {
    throw MoebiusError(ErrorCode::ParameterizationFailed,
                       "circle meets the line in " + std::to_string(hits.size()) + " points");
  }
  const double s_x = hits[0];
  const double s_y = hits[1];
  const auto x = sigma(s_x);
  const auto y = sigma(s_y);

  // l oriented from y to x, parameterized from y.
  auto param = [&](const ExtendedPoint& p) {
    return vec::dot(vec::sub(model.project(p), origin), l.direction);
  };
  const auto dir = param(x) > param(y) ? l.direction : vec::scale(l.direction, -1.0);
  const Line lyx = model.line(y, dir);

  QuadraticExcess out;
  out.a = d(x, y);
  const double a = out.a;

  const double span = wrap_angle(s_y - s_x);  // sigma_+ from x to y
  auto distance_param = [&](double from, double sign, const ExtendedPoint& anchor, double t) {
    // Smallest angle offset with d(sigma(from + sign*f), anchor) = t.
    double hi = span / 64.0;
    auto g = [&](double f) { return d(sigma(from + sign * f), anchor) - t; };
    while (g(hi) < 0.0) {
      hi *= 2.0;
      if (hi > span / 2.0) throw MoebiusError(ErrorCode::ParameterizationFailed, "distance not reached");
    }
    return sigma(from + sign * bisect_root(g, 0.0, hi));
  };

  SlopeOptions so;
  const double s_mid = s_x + span / 2.0;
  const double t_max = 0.5 * std::min(d(x, sigma(s_mid)), d(y, sigma(s_mid)));

  const Line lyx_back = lyx.reversed();
  auto b_plus = [&](const ExtendedPoint& p) { return busemann(model, lyx_back, p).value - a; };
  auto b_minus = [&](const ExtendedPoint& p) { return busemann(model, lyx, p).value; };

  const Line tx = make_line(model, tangent_line(model, sigma, s_x).line);
  const Line ty = make_line(model, tangent_line(model, sigma, s_y).line);
  out.alpha_x = slope_estimate(model, tx, lyx, so).alpha;
  out.alpha_y = slope_estimate(model, ty, lyx, so).alpha;
  out.alpha_agree = std::abs(out.alpha_x - out.alpha_y) <= alpha_tol;
  const double alpha = out.alpha_x;

  out.margin = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j <= samples; ++j) {
    const double t = t_max * static_cast<double>(j) / static_cast<double>(samples);
    const auto xt = distance_param(s_x, 1.0, x, t);
    const auto yt = distance_param(s_y, -1.0, y, t);
    const double lhs = b_plus(xt) + b_minus(yt);
    const double rhs = 2.0 * alpha * t - (1.0 - alpha * alpha) * t * t / a;
    out.margin = std::min(out.margin, rhs - lhs);
    ++out.n;
  }
  return out;
}

}  // namespace moebius
