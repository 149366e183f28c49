#pragma once

// Numerical geodesy over line models: Busemann functions, slopes, zigzag
// curves, lifting of base polygons, the area law, the functional xi_u and the
// complex structure J, and diagnostics of Ptolemy circles.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moebius/core.hpp"
#include "moebius/line_model.hpp"

namespace moebius {

// ---------------------------------------------------------------------------
// Busemann functions

/// Evaluation parameters t_j (strictly increasing, at least three) and the
/// polynomial order of the extrapolation in 1/t.
struct BusemannScheme {
  std::vector<double> t_values{1e3, 2e3, 4e3, 8e3};
  int extrapolation = 3;
  double tol = 1e-6;

  void validate() const;
};

struct BusemannValue {
  double value = 0.0;  // extrapolated limit
  double error = 0.0;  // |highest order - next lower order|
  double raw = 0.0;    // d(x, c(t_max)) - t_max
};

/// b(x) = lim d(x, c(t)) - t as t -> +∞, so that b(c(t0)) = -t0.
BusemannValue busemann(const LineModel& model, const Line& line, const ExtendedPoint& x,
                       const BusemannScheme& scheme = {});

/// max |b+(x) + b-(x)| for the two opposite Busemann functions of the line,
/// both normalized at line(0).
double busemann_flat_residual(const LineModel& model, const Line& line,
                              std::span<const ExtendedPoint> samples,
                              const BusemannScheme& scheme = {});

struct DualityResult {
  double residual = 0.0;       // max of the two one-sided residuals
  double right_derivative = 0.0;
  double left_derivative = 0.0;
  double convergence = 0.0;    // change of the extrapolated derivative under halving
};

/// Compares b+(x) and -b-(x) with the one-sided derivatives at 0 of
/// ln d'(x, c(t)), where d' = m_invert(d, line(0), 1) and c(t) = line(1/t).
DualityResult duality_residual(const LineModel& model, const Line& line, const ExtendedPoint& x,
                               double step = 1e-2, const BusemannScheme& scheme = {});

// ---------------------------------------------------------------------------
// Slopes

struct SlopeFit {
  double alpha = 0.0;
  double affinity_residual = 0.0;
};

struct SlopeOptions {
  double window = 1.0;
  int samples = 21;
  double affinity_tol = 1e-5;
  BusemannScheme scheme{};
};

/// Affine coefficient of t -> b_l(c'(t)) on [-window, window], with b_l
/// normalized at l(0).
SlopeFit slope_estimate(const LineModel& model, const Line& l_prime, const Line& l,
                        const SlopeOptions& options = {});

/// |slope(l', l) - slope(l, l')|
double slope_symmetry_residual(const LineModel& model, const Line& l, const Line& l_prime,
                               const SlopeOptions& options = {});

// ---------------------------------------------------------------------------
// Zigzag curves

/// A line given by a point and a unit base direction of the model.
struct OrientedLine {
  ExtendedPoint through;
  std::vector<double> direction;

  OrientedLine reversed() const;
};

Line make_line(const LineModel& model, const OrientedLine& l);

struct ZigzagSpec {
  ExtendedPoint o;
  std::vector<std::vector<double>> directions;  // unit base vectors
  std::vector<double> steps;                    // nonnegative, positive sum
  int depth = 12;

  void validate(const LineModel& model) const;
};

/// Piecewise geodesic curve; vertex n sits at parameter t[n] and segment n
/// runs from vertex n along directions[n].
struct Polyline {
  std::vector<double> t;
  std::vector<ExtendedPoint> vertices;
  std::vector<std::vector<double>> directions;

  ExtendedPoint at(const LineModel& model, double s) const;
};

/// gamma_p restricted to [t_min, t_max]; the parameter is the arc parameter of
/// the zigzag, one full pass through all steps taking sum(s)/2^(p-1).
/// Negative parameters use the reversed lines in reversed order.
Polyline zigzag(const LineModel& model, const ZigzagSpec& spec, double t_min, double t_max);

/// beta = sum alpha_i s_i / sum s_i with alpha_i = slope(l_i, l).
struct ZigzagAffinity {
  double beta = 0.0;
  double deviation = 0.0;  // max |b(gamma(t_n)) - beta t_n| over vertices
  std::vector<double> alphas;
};

ZigzagAffinity zigzag_busemann_affinity(const LineModel& model, const ZigzagSpec& spec,
                                        const std::vector<double>& l_direction, double t_max,
                                        const SlopeOptions& options = {});

/// |o gamma(t)| / |t| at the vertex parameter t = t_end.
double zigzag_endpoint_speed(const LineModel& model, const ZigzagSpec& spec, double t_end);

/// Distance between gamma_p(t) and gamma_{p+1}(t) at the common vertex t.
double zigzag_cauchy_gap(const LineModel& model, const ZigzagSpec& spec, double t);

struct Orthogonalization {
  std::vector<std::vector<double>> directions;  // frame (reoriented) then l
  std::vector<double> steps;                    // k + 1 entries, sum 1
  std::vector<double> alphas;                   // slope(l, l_i) >= 0
  std::vector<bool> flipped;
  double sum_sq = 0.0;
  bool degenerate = false;
};

/// Orthogonalization of l against a mutually orthogonal frame through o.
Orthogonalization orthogonalize(const LineModel& model, const ExtendedPoint& o,
                                const std::vector<std::vector<double>>& frame,
                                const std::vector<double>& l_direction, double tol = 1e-3,
                                const SlopeOptions& options = {});

// ---------------------------------------------------------------------------
// Lifting of base polygons

struct BasePolygon {
  std::vector<std::vector<double>> vertices;  // closed implicitly
  int orientation = 1;
  std::size_t pointed = 0;
};

struct LiftResult {
  ExtendedPoint end;
  double displacement = 0.0;  // dist(start, end)
  double fiber_shift = 0.0;   // fiber coordinate of end minus that of start
  int sign = 0;               // order of end relative to start in the fiber
};

LiftResult lift_polygon(const FiberedModel& model, const BasePolygon& polygon,
                        const ExtendedPoint& start);

struct Rectangle {
  std::vector<double> corner;  // base point
  double width = 1.0;          // along u
  double height = 1.0;         // along v
};

struct AreaLawFit {
  double c = 0.0;
  std::vector<double> residuals;  // delta^2 - c^2 area
  double r_squared = 1.0;
  bool linear = true;
};

AreaLawFit area_law_fit(const FiberedModel& model, std::span<const double> u,
                        std::span<const double> v, const std::vector<Rectangle>& rectangles);

/// Signed squared displacement of the rectangle u ∧ v based at the origin of
/// the base.
double xi(const FiberedModel& model, std::span<const double> u, std::span<const double> v);

struct JSearch {
  double grid_degrees = 2.0;
  double isolation_angle_degrees = 10.0;
  double isolation_gap = 1e-3;
  int max_rounds = 20;
};

struct JResult {
  std::vector<double> direction;  // unit, orthogonal to u
  double value = 0.0;              // xi_u(direction)
};

/// Maximizer of xi_u over the unit sphere of u^⊥.
JResult recover_J(const FiberedModel& model, std::span<const double> u, const JSearch& search = {});

// ---------------------------------------------------------------------------
// Distance components

struct DistComponents {
  double a = 0.0;  // base distance
  double b = 0.0;  // fiber distance after moving x into the fiber of y
};

DistComponents dist_components(const FiberedModel& model, const ExtendedPoint& x,
                               const ExtendedPoint& y);

/// max |d^4 - (a^4 + b^4)| / d^4 over the pairs.
double d_law_residual(const FiberedModel& model,
                      std::span<const std::pair<ExtendedPoint, ExtendedPoint>> pairs);

// ---------------------------------------------------------------------------
// Circles

/// Tangent line to sigma at angle s0 from symmetric secants, step-halved
/// until the direction changes by at most tol.
struct TangentLine {
  OrientedLine line;
  double direction_change = 0.0;
  double tangency_ratio = 0.0;  // dist(sigma(s0+h), line) / h at the smallest check step
};

TangentLine tangent_line(const LineModel& model, const ClosedCurve& sigma, double s0,
                         double tol = 1e-8);

/// Distance from p to a line, minimized near the base projection parameter.
double distance_to_line(const LineModel& model, const OrientedLine& l, const ExtendedPoint& p);

struct FiberCrossings {
  double s_x = 0.0;  // angles on sigma
  double s_y = 0.0;
  ExtendedPoint x;   // lower in the fiber order
  ExtendedPoint y;
};

/// The two points where sigma meets the fiber over `base`.
FiberCrossings circle_fiber_crossings(const FiberedModel& model, const ClosedCurve& sigma,
                                      std::span<const double> base, std::size_t scan = 4096);

/// Angles where sigma meets the line l (two expected for a secant).
std::vector<double> circle_line_crossings(const LineModel& model, const ClosedCurve& sigma,
                                          const OrientedLine& l, double accept = 1e-6);

struct CircleReport {
  FiberCrossings crossings;
  double mean_geometric = 0.0;    // max ||xz||zy| - |zu|^2| over interior fiber points z
  double unit_radius = 0.0;       // max ||z w| - R| with z the fiber midpoint of x, y
  double radius = 0.0;            // R = |z u| at the midpoint
  double equal_distances = 0.0;   // max ||u1 z| - |u2 z||
  bool two_sheets = true;         // projection monotone on both arcs
  double fiber_pythagoras = 0.0;  // on ordered fiber triples
  double rectifiability_exponent = 0.0;  // fitted p in L - |xx'| ~ |xx'|^p
};

CircleReport circle_diagnostics(const FiberedModel& model, const ClosedCurve& sigma,
                                std::span<const double> fiber_base, std::size_t samples = 64);

struct QuadraticExcess {
  double margin = 0.0;   // min over t of rhs - lhs
  double alpha_x = 0.0;  // slope at x
  double alpha_y = 0.0;  // slope at y
  bool alpha_agree = true;
  double a = 0.0;        // |xy|
  std::size_t n = 0;
};

/// Checks b+(x_t) + b-(y_t) <= 2 alpha t - (1 - alpha^2) t^2 / a for the
/// circle sigma meeting the line l in x and y.
QuadraticExcess quadratic_excess_check(const LineModel& model, const ClosedCurve& sigma,
                                       const OrientedLine& l, std::size_t samples = 40,
                                       double alpha_tol = 1e-3);

}  // namespace moebius
