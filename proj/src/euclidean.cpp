#include "moebius/euclidean.hpp"

#include <cmath>
#include <numbers>

#include "moebius/vec.hpp"

namespace moebius {

namespace {

void require_dim(const ExtendedPoint& p, std::size_t n) {
  if (p.is_finite() && p.dim() != n) {
    throw MoebiusError(ErrorCode::DimensionMismatch,
                       "expected a point of R^" + std::to_string(n) + ", got " + describe(p));
  }
}

}  // namespace

MetricEvaluator euclidean_metric(std::size_t n) {
  auto fn = [n](const ExtendedPoint& x, const ExtendedPoint& y) {
    require_dim(x, n);
    require_dim(y, n);
    return vec::dist(x.coords(), y.coords());
  };
  return MetricEvaluator(fn, ExtendedPoint::infinity(), "euclidean(" + std::to_string(n) + ")");
}

MetricEvaluator manhattan_metric(std::size_t n) {
  auto fn = [n](const ExtendedPoint& x, const ExtendedPoint& y) {
    require_dim(x, n);
    require_dim(y, n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(x[i] - y[i]);
    return s;
  };
  return MetricEvaluator(fn, ExtendedPoint::infinity(), "manhattan(" + std::to_string(n) + ")");
}

EuclideanModel::EuclideanModel(std::size_t n) : n_(n), metric_(euclidean_metric(n)) {
  if (n == 0) throw MoebiusError(ErrorCode::InvalidArgument, "dimension must be >= 1");
}

EuclideanModel euclidean_model(std::size_t n) { return EuclideanModel(n); }

Line EuclideanModel::line(const ExtendedPoint& x, std::span<const double> direction) const {
  if (x.is_infinity()) {
    throw MoebiusError(ErrorCode::InfinityNotProjectable, "line through the remote point");
  }
  require_dim(x, n_);
  if (direction.size() != n_ || std::abs(vec::norm(direction) - 1.0) > 1e-12) {
    throw MoebiusError(ErrorCode::NonUnitDirection, "direction must be a unit vector of R^n");
  }
  std::vector<double> base(x.coords().begin(), x.coords().end());
  std::vector<double> dir(direction.begin(), direction.end());
  return {[base, dir](double t) { return ExtendedPoint::finite(vec::axpy(base, t, dir)); },
          "euclid-line"};
}

std::vector<double> EuclideanModel::project(const ExtendedPoint& x) const {
  if (x.is_infinity()) {
    throw MoebiusError(ErrorCode::InfinityNotProjectable, "cannot project the remote point");
  }
  return {x.coords().begin(), x.coords().end()};
}

std::vector<double> stereographic_lift(const ExtendedPoint& x, std::size_t n) {
  std::vector<double> out(n + 1, 0.0);
  if (x.is_infinity()) {
    out[n] = 1.0;
    return out;
  }
  require_dim(x, n);
  const double r2 = vec::dot(x.coords(), x.coords());
  for (std::size_t i = 0; i < n; ++i) out[i] = 2.0 * x[i] / (r2 + 1.0);
  out[n] = (r2 - 1.0) / (r2 + 1.0);
  return out;
}

MetricEvaluator chordal_metric(std::size_t n) {
  auto fn = [n](const ExtendedPoint& x, const ExtendedPoint& y) {
    return vec::dist(stereographic_lift(x, n), stereographic_lift(y, n));
  };
  return MetricEvaluator(fn, std::nullopt, "chordal(" + std::to_string(n) + ")");
}

// ---------------------------------------------------------------------------

ExtendedPoint Circle::at(double angle) const {
  if (is_line) {
    const double theta = std::remainder(angle, 2.0 * std::numbers::pi);
    if (theta == 0.0) return ExtendedPoint::infinity();
    // theta in (-π, π] \ {0}; map to (0, 2π) so that the order runs from ∞ back to ∞.
    const double phi = theta > 0.0 ? theta : theta + 2.0 * std::numbers::pi;
    const double t = -1.0 / std::tan(phi / 2.0);
    return ExtendedPoint::finite(vec::axpy(center, t, e1));
  }
  auto p = vec::axpy(center, radius * std::cos(angle), e1);
  return ExtendedPoint::finite(vec::axpy(p, radius * std::sin(angle), e2));
}

std::vector<ExtendedPoint> Circle::sample(std::size_t count, double phase) const {
  std::vector<ExtendedPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(at(phase + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(count)));
  }
  return out;
}

Circle circle_through(const ExtendedPoint& p, const ExtendedPoint& q, const ExtendedPoint& r) {
  if (p == q || q == r || p == r) {
    throw MoebiusError(ErrorCode::DegenerateTriple, "points must be pairwise distinct");
  }
  std::vector<ExtendedPoint> finite;
  for (const auto* x : {&p, &q, &r}) {
    if (x->is_finite()) finite.push_back(*x);
  }
  const std::size_t n = finite.front().dim();
  for (const auto& x : finite) require_dim(x, n);

  auto make_line = [](std::span<const double> a, std::span<const double> b) {
    Circle c;
    c.is_line = true;
    c.center.assign(a.begin(), a.end());
    c.e1 = vec::normalized(vec::sub(b, a));
    return c;
  };

  if (finite.size() == 2) return make_line(finite[0].coords(), finite[1].coords());

  const auto a = finite[0].coords();
  const auto u = vec::sub(finite[1].coords(), a);
  const auto v = vec::sub(finite[2].coords(), a);
  const double lu = vec::norm(u);
  const auto e1 = vec::scale(u, 1.0 / lu);
  const double cx = vec::dot(v, e1);
  const auto w = vec::axpy(v, -cx, e1);
  const double cy = vec::norm(w);
  if (cy <= 1e-14 * std::max(lu, vec::norm(v))) {
    return make_line(a, finite[1].coords());
  }
  const auto e2 = vec::scale(w, 1.0 / cy);
  const double x0 = lu / 2.0;
  const double y0 = (cx * cx + cy * cy - lu * cx) / (2.0 * cy);

  Circle c;
  c.center = vec::axpy(vec::axpy(a, x0, e1), y0, e2);
  c.radius = std::hypot(x0, y0);
  // Start the parameterization at the first point.
  c.e1 = vec::normalized(vec::sub(a, c.center));
  const auto t = vec::axpy(e2, -vec::dot(e2, c.e1), c.e1);
  c.e2 = vec::normalized(t);
  return c;
}

MoebiusMap euclid_inversion(const ExtendedPoint& center, double r) {
  if (center.is_infinity()) {
    throw MoebiusError(ErrorCode::CenterIsOmega, "inversion center must be finite");
  }
  if (!(r > 0.0)) throw MoebiusError(ErrorCode::RadiusNonPositive, "radius must be positive");
  const std::vector<double> c(center.coords().begin(), center.coords().end());
  const double r2 = r * r;
  auto f = [c, r2](const ExtendedPoint& x) {
    if (x.is_infinity()) return ExtendedPoint::finite(c);
    const auto d = vec::sub(x.coords(), c);
    const double n2 = vec::dot(d, d);
    if (n2 == 0.0) return ExtendedPoint::infinity();
    return ExtendedPoint::finite(vec::axpy(c, r2 / n2, d));
  };
  return {f, f, "euclid_inversion"};
}

MoebiusMap euclid_translation(std::vector<double> shift) {
  auto f = [shift](const ExtendedPoint& x) {
    if (x.is_infinity()) return x;
    return ExtendedPoint::finite(vec::add(x.coords(), shift));
  };
  auto g = [shift](const ExtendedPoint& x) {
    if (x.is_infinity()) return x;
    return ExtendedPoint::finite(vec::sub(x.coords(), shift));
  };
  return {f, g, "euclid_translation"};
}

MoebiusMap euclid_scaling(double factor) {
  if (!(factor > 0.0)) throw MoebiusError(ErrorCode::InvalidArgument, "scale must be positive");
  auto f = [factor](const ExtendedPoint& x) {
    if (x.is_infinity()) return x;
    return ExtendedPoint::finite(vec::scale(x.coords(), factor));
  };
  auto g = [factor](const ExtendedPoint& x) {
    if (x.is_infinity()) return x;
    return ExtendedPoint::finite(vec::scale(x.coords(), 1.0 / factor));
  };
  return {f, g, "euclid_scaling"};
}

}  // namespace moebius
