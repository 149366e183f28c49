#include "moebius/heisenberg.hpp"

#include <cmath>
#include <numbers>

#include "moebius/vec.hpp"

namespace moebius {

double im_hermitian(const CVector& z, const CVector& w) {
  // Im(z conj w) = Im z Re w - Re z Im w, summed in a fixed order so that
  // im_hermitian(w, z) == -im_hermitian(z, w) exactly.
  double s = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    s += z[i].imag() * w[i].real() - z[i].real() * w[i].imag();
  }
  return s;
}

double norm_squared(const CVector& z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}

namespace {

void same_dim(const HeisElement& a, const HeisElement& b) {
  if (a.z.size() != b.z.size()) {
    throw MoebiusError(ErrorCode::DimensionMismatch, "Heisenberg elements of different dimension");
  }
}

CVector cadd(const CVector& a, const CVector& b) {
  CVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

CVector cscale(const CVector& a, Complex s) {
  CVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

}  // namespace

HeisElement heis_identity(std::size_t base_dim) { return {CVector(base_dim), 0.0}; }

HeisElement heis_mul(const HeisElement& g, const HeisElement& g2) {
  same_dim(g, g2);
  return {cadd(g.z, g2.z), g.h + g2.h - 0.5 * im_hermitian(g.z, g2.z)};
}

HeisElement heis_inverse(const HeisElement& g) { return {cscale(g.z, -1.0), -g.h}; }

HeisElement heis_commutator(const HeisElement& a, const HeisElement& b) {
  return heis_mul(heis_mul(a, b), heis_mul(heis_inverse(a), heis_inverse(b)));
}

HeisElement heis_dilate(const HeisElement& g, double lambda) {
  return {cscale(g.z, lambda), lambda * lambda * g.h};
}

double koranyi_gauge(const HeisElement& g) {
  const double r2 = norm_squared(g.z);
  return std::pow(r2 * r2 + 16.0 * g.h * g.h, 0.25);
}

double koranyi_distance(const HeisElement& x, const HeisElement& y) {
  same_dim(x, y);
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.z.size(); ++i) r2 += std::norm(x.z[i] - y.z[i]);
  const double v = x.h - y.h - 0.5 * im_hermitian(x.z, y.z);
  return std::pow(r2 * r2 + 16.0 * v * v, 0.25);
}

HeisElement koranyi_invert(const HeisElement& g) {
  const double r2 = norm_squared(g.z);
  const double n4 = r2 * r2 + 16.0 * g.h * g.h;
  if (n4 == 0.0) {
    throw MoebiusError(ErrorCode::UndefinedAtOrigin, "the identity is mapped to infinity");
  }
  // CR inversion in the coordinate t = 4h, where the gauge reads |z|^4 + t^2.
  const Complex denom(r2, 4.0 * g.h);
  return {cscale(g.z, -1.0 / denom), -g.h / n4};
}

// ---------------------------------------------------------------------------

CVector Unitary::apply(const CVector& z) const {
  CVector out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    Complex s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s += entries[i * dim + j] * z[j];
    out[i] = s;
  }
  return out;
}

Unitary Unitary::adjoint() const {
  Unitary out{dim, std::vector<Complex>(dim * dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out.entries[j * dim + i] = std::conj(entries[i * dim + j]);
  }
  return out;
}

Unitary Unitary::identity(std::size_t dim) {
  Unitary out{dim, std::vector<Complex>(dim * dim)};
  for (std::size_t i = 0; i < dim; ++i) out.entries[i * dim + i] = 1.0;
  return out;
}

Unitary Unitary::random(std::size_t dim, Rng& rng) {
  std::vector<CVector> cols(dim, CVector(dim));
  for (auto& c : cols) {
    for (auto& e : c) e = Complex(gaussian(rng), gaussian(rng));
  }
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      Complex proj = 0.0;
      for (std::size_t r = 0; r < dim; ++r) proj += std::conj(cols[i][r]) * cols[j][r];
      for (std::size_t r = 0; r < dim; ++r) cols[j][r] -= proj * cols[i][r];
    }
    const double n = std::sqrt(norm_squared(cols[j]));
    for (auto& e : cols[j]) e /= n;
  }
  Unitary out{dim, std::vector<Complex>(dim * dim)};
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) out.entries[i * dim + j] = cols[j][i];
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

ExtendedPoint line_or_infinity(const Line& line, double angle) {
  double phi = std::fmod(angle, 2.0 * std::numbers::pi);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi == 0.0) return ExtendedPoint::infinity();
  return line(angle_to_line_parameter(phi));
}

}  // namespace

// ---------------------------------------------------------------------------

namespace {

// Works on the stored real tuples directly; the closure owns no model state.
MetricEvaluator gauge_metric(std::size_t dim, int k) {
  auto fn = [dim](const ExtendedPoint& x, const ExtendedPoint& y) {
    if (x.dim() != 2 * dim + 1 || y.dim() != 2 * dim + 1) {
      throw MoebiusError(ErrorCode::DimensionMismatch, "point is not in the Heisenberg model");
    }
    double r2 = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double dr = x[2 * i] - y[2 * i];
      const double di = x[2 * i + 1] - y[2 * i + 1];
      r2 += dr * dr + di * di;
      im += x[2 * i + 1] * y[2 * i] - x[2 * i] * y[2 * i + 1];
    }
    const double v = x[2 * dim] - y[2 * dim] - 0.5 * im;
    return std::pow(r2 * r2 + 16.0 * v * v, 0.25);
  };
  return MetricEvaluator(fn, ExtendedPoint::infinity(), "koranyi(k=" + std::to_string(k) + ")");
}

std::size_t checked_dim(int k, int max_k) {
  if (k < 2 || k > max_k) {
    throw MoebiusError(ErrorCode::InvalidArgument,
                       "k must lie in [2, " + std::to_string(max_k) + "], got " + std::to_string(k));
  }
  return static_cast<std::size_t>(k - 1);
}

}  // namespace

HeisenbergModel::HeisenbergModel(int k, int max_k)
    : k_(k), metric_(gauge_metric(checked_dim(k, max_k), k)) {}

void HeisenbergModel::check(const HeisElement& g) const {
  if (g.z.size() != complex_dim()) {
    throw MoebiusError(ErrorCode::DimensionMismatch,
                       "element has base dimension " + std::to_string(g.z.size()) + ", model has " +
                           std::to_string(complex_dim()));
  }
}

ExtendedPoint HeisenbergModel::encode(const HeisElement& g) const {
  check(g);
  std::vector<double> c;
  c.reserve(2 * complex_dim() + 1);
  for (const auto& z : g.z) {
    c.push_back(z.real());
    c.push_back(z.imag());
  }
  c.push_back(g.h);
  return ExtendedPoint::finite(std::move(c));
}

HeisElement HeisenbergModel::decode(const ExtendedPoint& p) const {
  if (p.is_infinity()) {
    throw MoebiusError(ErrorCode::InfinityNotProjectable, "the remote point has no coordinates");
  }
  if (p.dim() != 2 * complex_dim() + 1) {
    throw MoebiusError(ErrorCode::DimensionMismatch, "point is not in the Heisenberg model");
  }
  HeisElement g{CVector(complex_dim()), p[2 * complex_dim()]};
  for (std::size_t i = 0; i < complex_dim(); ++i) g.z[i] = Complex(p[2 * i], p[2 * i + 1]);
  return g;
}

HeisElement HeisenbergModel::element(const CVector& z, double h) const {
  HeisElement g{z, h};
  check(g);
  return g;
}

std::vector<double> HeisenbergModel::to_real(const CVector& z) const {
  std::vector<double> out;
  out.reserve(2 * z.size());
  for (const auto& c : z) {
    out.push_back(c.real());
    out.push_back(c.imag());
  }
  return out;
}

CVector HeisenbergModel::to_complex(std::span<const double> v) const {
  if (v.size() != base_dim()) {
    throw MoebiusError(ErrorCode::DimensionMismatch, "base vector has the wrong dimension");
  }
  CVector out(complex_dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = Complex(v[2 * i], v[2 * i + 1]);
  return out;
}

CVector HeisenbergModel::unit_direction(std::size_t index) const {
  CVector out(complex_dim());
  out.at(index / 2) = (index % 2 == 0) ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
  return out;
}

Line HeisenbergModel::line(const ExtendedPoint& x, std::span<const double> direction) const {
  return horizontal_line(decode(x), to_complex(direction));
}

std::vector<double> HeisenbergModel::project(const ExtendedPoint& x) const {
  if (x.is_infinity()) {
    throw MoebiusError(ErrorCode::InfinityNotProjectable, "cannot project the remote point");
  }
  return to_real(decode(x).z);
}

double HeisenbergModel::fiber_coordinate(const ExtendedPoint& x) const { return decode(x).h; }

ExtendedPoint HeisenbergModel::fiber_point(std::span<const double> base, double coordinate) const {
  return encode({to_complex(base), coordinate});
}

// ---------------------------------------------------------------------------

MoebiusMap HeisenbergModel::left_translation(const HeisElement& g) const {
  check(g);
  const HeisenbergModel self = *this;
  const HeisElement ginv = heis_inverse(g);
  auto by = [self](const HeisElement& a) {
    return [self, a](const ExtendedPoint& p) {
      if (p.is_infinity()) return p;
      return self.encode(heis_mul(a, self.decode(p)));
    };
  };
  return {by(g), by(ginv), "left_translation"};
}

MoebiusMap HeisenbergModel::dilation(double lambda) const {
  if (!(lambda > 0.0)) throw MoebiusError(ErrorCode::InvalidArgument, "dilation factor must be > 0");
  const HeisenbergModel self = *this;
  auto by = [self](double s) {
    return [self, s](const ExtendedPoint& p) {
      if (p.is_infinity()) return p;
      return self.encode(heis_dilate(self.decode(p), s));
    };
  };
  return {by(lambda), by(1.0 / lambda), "dilation"};
}

MoebiusMap HeisenbergModel::rotation(const Unitary& u) const {
  if (u.dim != complex_dim()) throw MoebiusError(ErrorCode::DimensionMismatch, "unitary size");
  const HeisenbergModel self = *this;
  auto by = [self](const Unitary& m) {
    return [self, m](const ExtendedPoint& p) {
      if (p.is_infinity()) return p;
      const auto g = self.decode(p);
      return self.encode({m.apply(g.z), g.h});
    };
  };
  return {by(u), by(u.adjoint()), "rotation"};
}

MoebiusMap HeisenbergModel::conj_flip() const {
  const HeisenbergModel self = *this;
  auto j = [self](const ExtendedPoint& p) {
    if (p.is_infinity()) return p;
    auto g = self.decode(p);
    for (auto& c : g.z) c = std::conj(c);
    g.h = -g.h;
    return self.encode(g);
  };
  return {j, j, "conj_flip"};
}

MoebiusMap HeisenbergModel::koranyi_inversion() const {
  const HeisenbergModel self = *this;
  const ExtendedPoint origin = encode(heis_identity(complex_dim()));
  auto iota = [self, origin](const ExtendedPoint& p) {
    if (p.is_infinity()) return origin;
    if (p == origin) return ExtendedPoint::infinity();
    return self.encode(koranyi_invert(self.decode(p)));
  };
  return {iota, iota, "koranyi_inversion"};
}

MoebiusMap HeisenbergModel::space_inversion(const ExtendedPoint& omega, const ExtendedPoint& omega2,
                                            double r) const {
  if (omega == omega2) throw MoebiusError(ErrorCode::CoincidentPoles, "poles must be distinct");
  if (!(r > 0.0)) throw MoebiusError(ErrorCode::RadiusNonPositive, "sphere radius must be positive");

  // Inversion in the gauge sphere of radius rho about the finite point p.
  auto about = [this](const ExtendedPoint& p, double rho) {
    const auto g = decode(p);
    MoebiusMap m = compose(dilation(rho), compose(koranyi_inversion(),
                                                  compose(dilation(1.0 / rho),
                                                          left_translation(heis_inverse(g)))));
    m = compose(left_translation(g), m);
    m.label = "space_inversion";
    return m;
  };

  if (omega2.is_infinity()) return about(omega, r);
  if (omega.is_infinity()) return about(omega2, 1.0 / r);
  const MoebiusMap psi = about(omega2, 1.0);
  MoebiusMap m = compose(psi, compose(about(psi(omega), r), psi));
  m.label = "space_inversion";
  return m;
}

// ---------------------------------------------------------------------------

CVector HeisenbergModel::fibration_project(const HeisElement& x) const {
  check(x);
  return x.z;
}

HeisElement HeisenbergModel::mu_project(const HeisElement& x, const CVector& base) const {
  check(x);
  return {base, x.h - 0.5 * im_hermitian(x.z, base)};
}

Line HeisenbergModel::horizontal_line(const HeisElement& g, const CVector& zeta) const {
  check(g);
  if (zeta.size() != complex_dim() || std::abs(norm_squared(zeta) - 1.0) > 1e-12) {
    throw MoebiusError(ErrorCode::NonUnitDirection, "direction must be a unit vector of C^{k-1}");
  }
  const HeisenbergModel self = *this;
  return {[self, g, zeta](double t) { return self.encode(heis_mul(g, {cscale(zeta, t), 0.0})); },
          "horizontal-line"};
}

Line HeisenbergModel::fiber_line(const CVector& base) const {
  const HeisenbergModel self = *this;
  const CVector b = base;
  return {[self, b](double h) { return self.encode({b, h}); }, "fiber"};
}

CCircle HeisenbergModel::c_circle_through(const ExtendedPoint& p, const ExtendedPoint& q) const {
  if (p == q) throw MoebiusError(ErrorCode::CoincidentPoints, "C-circle needs two distinct points");

  auto vertical = [this](const CVector& base) {
    const Line fiber = fiber_line(base);
    CCircle c;
    c.vertical = true;
    c.base = base;
    c.curve = {[fiber](double a) { return line_or_infinity(fiber, a); }, "c-circle"};
    return c;
  };

  if (p.is_infinity()) return vertical(decode(q).z);
  if (q.is_infinity()) return vertical(decode(p).z);
  const auto gp = decode(p);
  const auto gq = decode(q);
  if (gp.z == gq.z) return vertical(gp.z);

  // Send q to ∞; the C-circle through the image of p and ∞ is a fiber.
  const MoebiusMap psi = space_inversion(q, ExtendedPoint::infinity(), 1.0);
  const auto base = decode(psi(p)).z;
  const Line fiber = fiber_line(base);
  CCircle c;
  c.vertical = false;
  c.base = base;
  c.curve = {[psi, fiber](double a) { return psi(line_or_infinity(fiber, a)); }, "c-circle"};
  return c;
}

ClosedCurve HeisenbergModel::r_circle_from_line(const Line& line, const MoebiusMap& inv) const {
  if (inv.has_inverse()) {
    const ExtendedPoint pole = inv.invert(ExtendedPoint::infinity());
    if (pole.is_finite()) {
      // The pole lies on the line iff it is joined to line(0) horizontally
      // along the line's own direction; test by sampling the closest approach.
      const auto p0 = line(0.0);
      const auto p1 = line(1.0);
      const auto gp = decode(pole);
      const auto g0 = decode(p0);
      const auto dir = decode(p1).z;
      CVector zeta(dir.size());
      for (std::size_t i = 0; i < dir.size(); ++i) zeta[i] = dir[i] - g0.z[i];
      const auto rel = heis_mul(heis_inverse(g0), gp);
      // rel = (t zeta, 0) for some real t iff the pole is on the line.
      Complex t = 0.0;
      for (std::size_t i = 0; i < zeta.size(); ++i) t += rel.z[i] * std::conj(zeta[i]);
      double off = std::abs(rel.h);
      for (std::size_t i = 0; i < zeta.size(); ++i) off += std::abs(rel.z[i] - t.real() * zeta[i]);
      if (off <= 1e-12 * (1.0 + koranyi_gauge(rel))) {
        throw MoebiusError(ErrorCode::PoleOnLine, "inversion pole lies on the line");
      }
    }
  }
  return {[line, inv](double a) { return inv(line_or_infinity(line, a)); }, "r-circle"};
}

ClosedCurve HeisenbergModel::unit_r_circle(double radius) const {
  if (!(radius > 0.0)) throw MoebiusError(ErrorCode::RadiusNonPositive, "radius must be positive");
  // ι maps the line (t, -1/8) to a circle through (0,0) and (0, 1/2); moving
  // the fiber midpoint (0, 1/4) to the origin centers it.
  const CVector e = unit_direction(0);
  const Line l = horizontal_line({CVector(complex_dim()), -0.125}, e);
  HeisElement shift{CVector(complex_dim()), -0.25};
  // ι sends (±1/√2, -1/8) to height 1/4 over ∓(1+i)/√2; rotate those onto ±1.
  Unitary u = Unitary::identity(complex_dim());
  u.entries[0] = std::polar(1.0, -std::numbers::pi / 4.0);
  const MoebiusMap m = compose(
      dilation(radius),
      compose(rotation(u), compose(left_translation(shift), koranyi_inversion())));
  ClosedCurve c = r_circle_from_line(l, m);
  c.label = "unit-r-circle";
  return c;
}

}  // namespace moebius
