#pragma once

// Model-independent Moebius machinery: extended points, cross-ratio triples,
// metric inversion, Ptolemy classification and numerical Moebius checks.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "moebius/rng.hpp"

namespace moebius {

enum class ErrorCode {
  InadmissibleQuadruple,
  MetricDomainError,
  RadiusNonPositive,
  CenterIsOmega,
  MapUndefinedAt,
  TooFewPoints,
  DegenerateTriple,
  DimensionMismatch,
  UndefinedAtOrigin,
  CoincidentPoles,
  InfinityNotProjectable,
  CoincidentPoints,
  NonUnitDirection,
  PoleOnLine,
  NonConvergent,
  NonAffine,
  SlopeEstimationFailed,
  EdgeLiftFailed,
  NotOrthogonal,
  MaximizerNotIsolated,
  CircleDoesNotMeetFiberTwice,
  ParameterizationFailed,
  UnknownSuite,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

class MoebiusError : public std::runtime_error {
 public:
  MoebiusError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A point of a boundary model: a finite coordinate tuple or the single
/// infinitely remote point. Equality is exact coordinate equality.
class ExtendedPoint {
 public:
  ExtendedPoint() : infinite_(true) {}

  static ExtendedPoint infinity() { return ExtendedPoint(); }
  static ExtendedPoint finite(std::vector<double> coords);

  bool is_infinity() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  std::span<const double> coords() const noexcept { return coords_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }

  friend bool operator==(const ExtendedPoint&, const ExtendedPoint&) = default;

 private:
  bool infinite_ = true;
  std::vector<double> coords_;
};

std::string describe(const ExtendedPoint& p);

using Quadruple = std::array<ExtendedPoint, 4>;

/// Normalized projective triple (a:b:c), a+b+c = 1, entries >= 0.
struct CrossRatioTriple {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  /// Max-abs difference in simplex coordinates.
  double distance(const CrossRatioTriple& other) const;
};

enum class PtolemyTag { InteriorDelta, BoundaryDelta, Violation };

const char* to_string(PtolemyTag tag);

struct PtolemyClass {
  PtolemyTag tag = PtolemyTag::InteriorDelta;
  /// min over the three triangle-inequality defects, in simplex units
  double slack = 0.0;
};

/// Immutable pairwise distance on extended points. The wrapped function is
/// only ever called for distinct points neither of which is omega; the
/// conventions d(x,x) = 0 and d(x, omega) = +inf are applied here.
class MetricEvaluator {
 public:
  using DistanceFn = std::function<double(const ExtendedPoint&, const ExtendedPoint&)>;

  MetricEvaluator(DistanceFn fn, std::optional<ExtendedPoint> omega, std::string label);

  double operator()(const ExtendedPoint& x, const ExtendedPoint& y) const;
  double distance(const ExtendedPoint& x, const ExtendedPoint& y) const { return (*this)(x, y); }

  const std::optional<ExtendedPoint>& omega() const noexcept { return omega_; }
  const std::string& label() const noexcept { return label_; }

 private:
  DistanceFn fn_;
  std::optional<ExtendedPoint> omega_;
  std::string label_;
};

/// A point map with its (optional) inverse. Moebius behaviour is checked
/// against samples, never assumed.
struct MoebiusMap {
  using PointFn = std::function<ExtendedPoint(const ExtendedPoint&)>;

  PointFn forward;
  PointFn inverse;  // may be empty
  std::string label;

  ExtendedPoint operator()(const ExtendedPoint& p) const;
  bool has_inverse() const noexcept { return static_cast<bool>(inverse); }
  ExtendedPoint invert(const ExtendedPoint& p) const;

  static MoebiusMap identity();
};

/// outer ∘ inner
MoebiusMap compose(const MoebiusMap& outer, const MoebiusMap& inner);

bool is_admissible(const Quadruple& q);

/// crt_d(x,y,z,u) = (d(x,y)d(z,u) : d(x,z)d(y,u) : d(x,u)d(y,z)), normalized.
/// Infinite distances are resolved by the one-point and two-point conventions:
/// every product is ranked by how many infinite factors it carries and only the
/// top-ranked products survive, with each infinite factor read as 1. This gives
/// (d(x,y):d(x,z):d(y,z)) for u = omega and (0:1:1) for (x,y,omega,omega); a
/// vanishing factor next to an infinite one contributes 0, which is the
/// continuity limit for coincident pairs.
CrossRatioTriple cross_ratio(const MetricEvaluator& d, const Quadruple& q);

PtolemyClass classify_triple(const CrossRatioTriple& t, double tol = 1e-12);

/// m-inversion d_z(x,y) = r^2 d(x,y) / (d(z,x) d(z,y)); z becomes infinitely
/// remote and the old omega sits at distance r^2/d(x,z).
MetricEvaluator m_invert(const MetricEvaluator& d, const ExtendedPoint& z, double r = 1.0);

/// (f* d)(x,y) = d(f(x), f(y)).
MetricEvaluator pullback(const MetricEvaluator& d, const MoebiusMap& f);

/// Max simplex distance between crt(Q) and crt(f(Q)) over the quadruples.
double moebius_residual(const MetricEvaluator& d, const MoebiusMap& f,
                        std::span<const Quadruple> quads);

using PointSampler = std::function<ExtendedPoint(Rng&)>;

struct PtolemyScanReport {
  std::size_t n = 0;
  double min_slack = 0.0;
  Quadruple worst;
  std::size_t violations = 0;
  std::uint64_t seed = 0;
};

/// Classifies n random admissible quadruples drawn from the sampler. The
/// sample stream is split into a fixed number of partitions, each with its
/// own RNG stream, so the report does not depend on the worker count.
PtolemyScanReport ptolemy_scan(const MetricEvaluator& d, const PointSampler& sampler,
                               std::size_t n, std::uint64_t seed, double tol = 1e-12,
                               unsigned workers = 1);

/// Max relative defect of d(x,z)d(y,u) = d(x,y)d(z,u) + d(x,u)d(y,z) over all
/// quadruples taken in the given cyclic order.
double circle_residual(const MetricEvaluator& d, std::span<const ExtendedPoint> pts);

}  // namespace moebius
