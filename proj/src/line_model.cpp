#include "moebius/line_model.hpp"

#include <cmath>
#include <numbers>

#include "moebius/vec.hpp"

namespace moebius {

Line Line::reversed() const {
  auto f = at;
  return {[f](double t) { return f(-t); }, "-" + label};
}

Line Line::shifted(double t0) const {
  auto f = at;
  return {[f, t0](double t) { return f(t0 + t); }, label};
}

double angle_to_line_parameter(double angle) {
  double phi = std::fmod(angle, 2.0 * std::numbers::pi);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  return -1.0 / std::tan(phi / 2.0);
}

std::vector<ExtendedPoint> ClosedCurve::sample(std::size_t count) const {
  std::vector<ExtendedPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(at(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count)));
  }
  return out;
}

ExtendedPoint FiberedModel::fiber_transfer(const ExtendedPoint& x,
                                           std::span<const double> base) const {
  const auto from = project(x);
  const auto delta = vec::sub(base, from);
  const double len = vec::norm(delta);
  if (len == 0.0) return x;
  const auto dir = vec::scale(delta, 1.0 / len);
  return line(x, dir)(len);
}

}  // namespace moebius
