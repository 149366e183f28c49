#pragma once

// The boundary model R^n ∪ ∞ of real hyperbolic space.

#include <span>
#include <vector>

#include "moebius/core.hpp"
#include "moebius/line_model.hpp"

namespace moebius {

class EuclideanModel final : public LineModel {
 public:
  explicit EuclideanModel(std::size_t n);

  std::size_t n() const noexcept { return n_; }

  const MetricEvaluator& metric() const override { return metric_; }
  std::size_t base_dim() const override { return n_; }
  Line line(const ExtendedPoint& x, std::span<const double> direction) const override;
  std::vector<double> project(const ExtendedPoint& x) const override;

 private:
  std::size_t n_;
  MetricEvaluator metric_;
};

EuclideanModel euclidean_model(std::size_t n);

/// Extended Euclidean metric on R^n ∪ ∞ with omega = ∞.
MetricEvaluator euclidean_metric(std::size_t n);

/// Inverse stereographic projection R^n ∪ ∞ -> S^n ⊂ R^{n+1}, ∞ -> north pole.
std::vector<double> stereographic_lift(const ExtendedPoint& x, std::size_t n);

/// Bounded chordal metric |π(x) - π(y)| on S^n; no infinitely remote point.
MetricEvaluator chordal_metric(std::size_t n);

/// L1 metric on R^n ∪ ∞. Not Ptolemy for n >= 2; used by negative checks.
MetricEvaluator manhattan_metric(std::size_t n);

/// Round circle or line ∪ ∞ in R^n, parameterized by an angle in [0, 2π).
/// For a line, angle 0 is ∞ and the remaining angles run along the line.
struct Circle {
  bool is_line = false;
  std::vector<double> center;  // base point on the line when is_line
  double radius = 0.0;         // unused for lines
  std::vector<double> e1;      // unit; line direction when is_line
  std::vector<double> e2;      // unit, orthogonal to e1; unused for lines

  ExtendedPoint at(double angle) const;
  std::vector<ExtendedPoint> sample(std::size_t count, double phase = 0.0) const;
};

/// The circle (or line ∪ ∞) through three pairwise distinct points, at most
/// one of which is ∞. Collinear finite triples give a line.
Circle circle_through(const ExtendedPoint& p, const ExtendedPoint& q, const ExtendedPoint& r);

/// x -> c + r^2 (x - c)/|x - c|^2, swapping c and ∞.
MoebiusMap euclid_inversion(const ExtendedPoint& center, double r);

MoebiusMap euclid_translation(std::vector<double> shift);

MoebiusMap euclid_scaling(double factor);

}  // namespace moebius
