#pragma once

// What the geodesy routines need from a boundary model: a metric with an
// infinitely remote point, unit-speed lines in closed form, and the base
// projection along which Busemann-parallel lines are organized.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "moebius/core.hpp"

namespace moebius {

/// Unit-speed parameterization t -> c(t) of a Ptolemy line.
struct Line {
  std::function<ExtendedPoint(double)> at;
  std::string label;

  ExtendedPoint operator()(double t) const { return at(t); }

  /// Same set, opposite orientation.
  Line reversed() const;
  /// Reparameterized so that the new c(0) is the old c(t0).
  Line shifted(double t0) const;
};

/// A closed curve sampled by angle in [0, 2π).
struct ClosedCurve {
  std::function<ExtendedPoint(double)> at;
  std::string label;

  ExtendedPoint operator()(double angle) const { return at(angle); }
  std::vector<ExtendedPoint> sample(std::size_t count) const;
};

/// Parameterization of a line ∪ ∞ by angle: 0 -> ∞, the rest in order.
double angle_to_line_parameter(double angle);

class LineModel {
 public:
  virtual ~LineModel() = default;

  virtual const MetricEvaluator& metric() const = 0;
  /// Real dimension of the base (direction space).
  virtual std::size_t base_dim() const = 0;
  /// The line through x whose direction class is `direction` (a unit base
  /// vector). Lines sharing a direction are Busemann parallel.
  virtual Line line(const ExtendedPoint& x, std::span<const double> direction) const = 0;
  /// Base projection; the base carries the Euclidean metric.
  virtual std::vector<double> project(const ExtendedPoint& x) const = 0;
};

/// A line model whose projection has nontrivial fibers carrying an order O.
class FiberedModel : public LineModel {
 public:
  /// Coordinate along the fiber through x, increasing in the order O.
  virtual double fiber_coordinate(const ExtendedPoint& x) const = 0;
  /// Point of the fiber over `base` with the given fiber coordinate.
  virtual ExtendedPoint fiber_point(std::span<const double> base, double coordinate) const = 0;

  /// End point of the line from x to the fiber over `base`.
  ExtendedPoint fiber_transfer(const ExtendedPoint& x, std::span<const double> base) const;
};

}  // namespace moebius
