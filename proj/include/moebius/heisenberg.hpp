#pragma once

// The Koranyi model of the boundary of complex hyperbolic space CH^k: the
// Heisenberg group C^{k-1} x R with its gauge metric, the maps that act on it
// by Moebius transformations, and the C-circles / R-circles it carries.
//
// Conventions: (z, z') = sum z_i conj(z'_i);
//   (z,h)(z',h') = (z + z', h + h' - Im(z,z')/2);
//   |x x'|^4 = |z - z'|^4 + 16 (h - h' - Im(z,z')/2)^2.
// A finite point is stored as the real tuple (Re z1, Im z1, ..., h).

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "moebius/core.hpp"
#include "moebius/line_model.hpp"

namespace moebius {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

struct HeisElement {
  CVector z;
  double h = 0.0;

  friend bool operator==(const HeisElement&, const HeisElement&) = default;
};

/// Hermitian form sum z_i conj(w_i), imaginary part; antisymmetric bit for bit.
double im_hermitian(const CVector& z, const CVector& w);
double norm_squared(const CVector& z);

HeisElement heis_identity(std::size_t base_dim);
HeisElement heis_mul(const HeisElement& g, const HeisElement& g2);
HeisElement heis_inverse(const HeisElement& g);
HeisElement heis_commutator(const HeisElement& a, const HeisElement& b);
HeisElement heis_dilate(const HeisElement& g, double lambda);
/// Koranyi inversion on group elements; the identity has no finite image.
HeisElement koranyi_invert(const HeisElement& g);
double koranyi_gauge(const HeisElement& g);
/// Eq. for |x x'| evaluated directly; symmetric bit for bit.
double koranyi_distance(const HeisElement& x, const HeisElement& y);

/// Row-major (k-1)x(k-1) complex matrix.
struct Unitary {
  std::size_t dim = 0;
  std::vector<Complex> entries;

  CVector apply(const CVector& z) const;
  Unitary adjoint() const;
  static Unitary identity(std::size_t dim);
  /// Haar-like sample via Gram-Schmidt of a complex Gaussian matrix.
  static Unitary random(std::size_t dim, Rng& rng);
};

/// Vertical line h -> (z0, h); with ∞ appended it is a C-circle.
struct CLine {
  CVector base;
};

struct CCircle {
  bool vertical = false;  // true: fiber over `base` ∪ ∞
  CVector base;
  ClosedCurve curve;
};

class HeisenbergModel final : public FiberedModel {
 public:
  static constexpr int kDefaultMaxK = 4;

  explicit HeisenbergModel(int k, int max_k = kDefaultMaxK);

  int k() const noexcept { return k_; }
  std::size_t complex_dim() const noexcept { return static_cast<std::size_t>(k_ - 1); }

  ExtendedPoint encode(const HeisElement& g) const;
  HeisElement decode(const ExtendedPoint& p) const;
  HeisElement element(const CVector& z, double h) const;

  std::vector<double> to_real(const CVector& z) const;
  CVector to_complex(std::span<const double> v) const;

  // LineModel / FiberedModel
  const MetricEvaluator& metric() const override { return metric_; }
  std::size_t base_dim() const override { return 2 * complex_dim(); }
  Line line(const ExtendedPoint& x, std::span<const double> direction) const override;
  std::vector<double> project(const ExtendedPoint& x) const override;
  double fiber_coordinate(const ExtendedPoint& x) const override;
  ExtendedPoint fiber_point(std::span<const double> base, double coordinate) const override;

  double koranyi_dist(const ExtendedPoint& x, const ExtendedPoint& y) const { return metric_(x, y); }

  // Moebius maps of the model.
  MoebiusMap left_translation(const HeisElement& g) const;
  MoebiusMap dilation(double lambda) const;
  MoebiusMap rotation(const Unitary& u) const;
  MoebiusMap conj_flip() const;
  /// Involution swapping (0,0) and ∞ with d(ιx, ιy) = d(x,y) / (N(x) N(y)).
  MoebiusMap koranyi_inversion() const;
  /// Space inversion swapping omega and omega2 and preserving the sphere
  /// S = {x : d2(x, omega) = r}, where d2 is the gauge metric when omega2 = ∞
  /// and m_invert(gauge, omega2, 1) otherwise.
  MoebiusMap space_inversion(const ExtendedPoint& omega, const ExtendedPoint& omega2, double r) const;

  // Fibration.
  CVector fibration_project(const HeisElement& x) const;
  HeisElement mu_project(const HeisElement& x, const CVector& base) const;

  // Lines and circles.
  /// t -> g (t ζ, 0); |ζ| = 1.
  Line horizontal_line(const HeisElement& g, const CVector& zeta) const;
  Line fiber_line(const CVector& base) const;  // h -> (base, h); not a Ptolemy line
  CCircle c_circle_through(const ExtendedPoint& p, const ExtendedPoint& q) const;
  /// Image of line ∪ ∞ under `inv`; bounded when the pole of `inv` is off the line.
  ClosedCurve r_circle_from_line(const Line& line, const MoebiusMap& inv) const;
  /// R-circle centered at (0,0), meeting the central fiber at (0, ∓R²/4) and
  /// the real horizontal line at (±R, 0).
  ClosedCurve unit_r_circle(double radius = 1.0) const;

  CVector unit_direction(std::size_t index) const;  // e_j or i e_j for index 2j, 2j+1

 private:
  void check(const HeisElement& g) const;

  int k_;
  MetricEvaluator metric_;
};

}  // namespace moebius
