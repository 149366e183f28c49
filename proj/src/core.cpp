#include "moebius/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace moebius {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InadmissibleQuadruple: return "InadmissibleQuadruple";
    case ErrorCode::MetricDomainError: return "MetricDomainError";
    case ErrorCode::RadiusNonPositive: return "RadiusNonPositive";
    case ErrorCode::CenterIsOmega: return "CenterIsOmega";
    case ErrorCode::MapUndefinedAt: return "MapUndefinedAt";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateTriple: return "DegenerateTriple";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UndefinedAtOrigin: return "UndefinedAtOrigin";
    case ErrorCode::CoincidentPoles: return "CoincidentPoles";
    case ErrorCode::InfinityNotProjectable: return "InfinityNotProjectable";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::NonUnitDirection: return "NonUnitDirection";
    case ErrorCode::PoleOnLine: return "PoleOnLine";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::NonAffine: return "NonAffine";
    case ErrorCode::SlopeEstimationFailed: return "SlopeEstimationFailed";
    case ErrorCode::EdgeLiftFailed: return "EdgeLiftFailed";
    case ErrorCode::NotOrthogonal: return "NotOrthogonal";
    case ErrorCode::MaximizerNotIsolated: return "MaximizerNotIsolated";
    case ErrorCode::CircleDoesNotMeetFiberTwice: return "CircleDoesNotMeetFiberTwice";
    case ErrorCode::ParameterizationFailed: return "ParameterizationFailed";
    case ErrorCode::UnknownSuite: return "UnknownSuite";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

const char* to_string(PtolemyTag tag) {
  switch (tag) {
    case PtolemyTag::InteriorDelta: return "interior";
    case PtolemyTag::BoundaryDelta: return "boundary";
    case PtolemyTag::Violation: return "violation";
  }
  return "?";
}

ExtendedPoint ExtendedPoint::finite(std::vector<double> coords) {
  for (double c : coords) {
    if (!std::isfinite(c)) {
      throw MoebiusError(ErrorCode::InvalidArgument, "non-finite coordinate in finite point");
    }
  }
  ExtendedPoint p;
  p.infinite_ = false;
  p.coords_ = std::move(coords);
  return p;
}

std::string describe(const ExtendedPoint& p) {
  if (p.is_infinity()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) os << ", ";
    os << p[i];
  }
  os << ')';
  return os.str();
}

double CrossRatioTriple::distance(const CrossRatioTriple& o) const {
  return std::max({std::abs(a - o.a), std::abs(b - o.b), std::abs(c - o.c)});
}

// ---------------------------------------------------------------------------

MetricEvaluator::MetricEvaluator(DistanceFn fn, std::optional<ExtendedPoint> omega,
                                 std::string label)
    : fn_(std::move(fn)), omega_(std::move(omega)), label_(std::move(label)) {}

double MetricEvaluator::operator()(const ExtendedPoint& x, const ExtendedPoint& y) const {
  if (x == y) return 0.0;
  if (omega_ && (x == *omega_ || y == *omega_)) {
    return std::numeric_limits<double>::infinity();
  }
  const double v = fn_(x, y);
  if (std::isnan(v) || v < 0.0) {
    throw MoebiusError(ErrorCode::MetricDomainError,
                       label_ + " undefined at " + describe(x) + ", " + describe(y));
  }
  return v;
}

ExtendedPoint MoebiusMap::operator()(const ExtendedPoint& p) const {
  try {
    return forward(p);
  } catch (const MoebiusError& e) {
    if (e.code() == ErrorCode::MapUndefinedAt) throw;
    throw MoebiusError(ErrorCode::MapUndefinedAt, label + " at " + describe(p) + " (" + e.what() + ")");
  }
}

ExtendedPoint MoebiusMap::invert(const ExtendedPoint& p) const {
  if (!inverse) {
    throw MoebiusError(ErrorCode::MapUndefinedAt, label + " has no known inverse");
  }
  return inverse(p);
}

MoebiusMap MoebiusMap::identity() {
  auto id = [](const ExtendedPoint& p) { return p; };
  return {id, id, "identity"};
}

MoebiusMap compose(const MoebiusMap& outer, const MoebiusMap& inner) {
  MoebiusMap out;
  out.forward = [outer, inner](const ExtendedPoint& p) { return outer(inner(p)); };
  if (outer.inverse && inner.inverse) {
    out.inverse = [outer, inner](const ExtendedPoint& p) {
      return inner.invert(outer.invert(p));
    };
  }
  out.label = outer.label + " o " + inner.label;
  return out;
}

// ---------------------------------------------------------------------------

bool is_admissible(const Quadruple& q) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    int count = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q[i] == q[j]) ++count;
    }
    if (count >= 3) return false;
  }
  return true;
}

namespace {

// A distance with infinite values tracked symbolically: value * inf^order.
struct Graded {
  double value;
  int order;
};

Graded grade(double d) {
  if (std::isinf(d)) return {1.0, 1};
  return {d, 0};
}

Graded times(Graded x, Graded y) { return {x.value * y.value, x.order + y.order}; }

std::array<double, 3> resolve(const std::array<Graded, 3>& products) {
  int top = 0;
  for (const auto& p : products) top = std::max(top, p.order);
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = products[i].order == top ? products[i].value : 0.0;
  }
  return out;
}

CrossRatioTriple normalize(const std::array<double, 3>& raw) {
  const double sum = raw[0] + raw[1] + raw[2];
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw MoebiusError(ErrorCode::MetricDomainError, "cross-ratio triple is (0:0:0) or not finite");
  }
  return {raw[0] / sum, raw[1] / sum, raw[2] / sum};
}

std::array<Graded, 3> products(const std::array<double, 6>& d) {
  // d: xy, xz, xu, yz, yu, zu
  return {times(grade(d[0]), grade(d[5])), times(grade(d[1]), grade(d[4])),
          times(grade(d[2]), grade(d[3]))};
}

}  // namespace

CrossRatioTriple cross_ratio(const MetricEvaluator& d, const Quadruple& q) {
  if (!is_admissible(q)) {
    throw MoebiusError(ErrorCode::InadmissibleQuadruple, "an entry occurs three or more times");
  }
  const auto& [x, y, z, u] = q;
  const std::array<double, 6> dist{d(x, y), d(x, z), d(x, u), d(y, z), d(y, u), d(z, u)};
  return normalize(resolve(products(dist)));
}

PtolemyClass classify_triple(const CrossRatioTriple& t, double tol) {
  const double slack = std::min({t.b + t.c - t.a, t.a + t.c - t.b, t.a + t.b - t.c});
  PtolemyTag tag = PtolemyTag::InteriorDelta;
  if (slack < -tol) {
    tag = PtolemyTag::Violation;
  } else if (slack <= tol) {
    tag = PtolemyTag::BoundaryDelta;
  }
  return {tag, slack};
}

MetricEvaluator m_invert(const MetricEvaluator& d, const ExtendedPoint& z, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw MoebiusError(ErrorCode::RadiusNonPositive, "inversion radius must be positive");
  }
  if (d.omega() && *d.omega() == z) {
    throw MoebiusError(ErrorCode::CenterIsOmega, "inversion center is the infinitely remote point");
  }
  const double r2 = r * r;
  auto fn = [d, z, r2](const ExtendedPoint& x, const ExtendedPoint& y) {
    const auto& old = d.omega();
    if (old && x == *old) return r2 / d(y, z);
    if (old && y == *old) return r2 / d(x, z);
    return r2 * d(x, y) / (d(z, x) * d(z, y));
  };
  return MetricEvaluator(fn, z, "m_invert(" + d.label() + ")");
}

MetricEvaluator pullback(const MetricEvaluator& d, const MoebiusMap& f) {
  std::optional<ExtendedPoint> omega;
  if (d.omega() && f.has_inverse()) omega = f.invert(*d.omega());
  auto fn = [d, f](const ExtendedPoint& x, const ExtendedPoint& y) { return d(f(x), f(y)); };
  return MetricEvaluator(fn, omega, "pullback(" + d.label() + ", " + f.label + ")");
}

double moebius_residual(const MetricEvaluator& d, const MoebiusMap& f,
                        std::span<const Quadruple> quads) {
  double worst = 0.0;
  for (const auto& q : quads) {
    const Quadruple image{f(q[0]), f(q[1]), f(q[2]), f(q[3])};
    worst = std::max(worst, cross_ratio(d, q).distance(cross_ratio(d, image)));
  }
  return worst;
}

PtolemyScanReport ptolemy_scan(const MetricEvaluator& d, const PointSampler& sampler,
                               std::size_t n, std::uint64_t seed, double tol, unsigned workers) {
  constexpr std::size_t kPartitions = 16;
  struct Partial {
    std::size_t n = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    Quadruple worst;
    std::size_t violations = 0;
  };
  std::vector<Partial> partials(kPartitions);

  auto run_partition = [&](std::size_t p) {
    Rng rng = make_rng(seed, p);
    const std::size_t count = n / kPartitions + (p < n % kPartitions ? 1 : 0);
    Partial& out = partials[p];
    while (out.n < count) {
      Quadruple q{sampler(rng), sampler(rng), sampler(rng), sampler(rng)};
      if (!is_admissible(q)) continue;
      const auto cls = classify_triple(cross_ratio(d, q), tol);
      ++out.n;
      if (cls.tag == PtolemyTag::Violation) ++out.violations;
      if (cls.slack < out.min_slack) {
        out.min_slack = cls.slack;
        out.worst = q;
      }
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, kPartitions));
  if (workers == 1) {
    for (std::size_t p = 0; p < kPartitions; ++p) run_partition(p);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t p = w; p < kPartitions; p += workers) run_partition(p);
      });
    }
    for (auto& t : pool) t.join();
  }

  PtolemyScanReport report;
  report.seed = seed;
  report.min_slack = std::numeric_limits<double>::infinity();
  for (const auto& part : partials) {
    report.n += part.n;
    report.violations += part.violations;
    if (part.min_slack < report.min_slack) {
      report.min_slack = part.min_slack;
      report.worst = part.worst;
    }
  }
  return report;
}

double circle_residual(const MetricEvaluator& d, std::span<const ExtendedPoint> pts) {
  const std::size_t m = pts.size();
  if (m < 4) throw MoebiusError(ErrorCode::TooFewPoints, "need at least 4 points");
  std::vector<double> dist(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      dist[i * m + j] = dist[j * m + i] = d(pts[i], pts[j]);
    }
  }
  auto at = [&](std::size_t i, std::size_t j) { return dist[i * m + j]; };
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        for (std::size_t l = k + 1; l < m; ++l) {
          // (x,y,z,u) = (i,j,k,l) in cyclic order: (x,z) separates (y,u).
          const auto t = normalize(resolve(products(
              {at(i, j), at(i, k), at(i, l), at(j, k), at(j, l), at(k, l)})));
          worst = std::max(worst, std::abs(t.b - t.a - t.c) / t.b);
        }
      }
    }
  }
  return worst;
}

}  // namespace moebius
