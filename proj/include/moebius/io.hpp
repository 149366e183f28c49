#pragma once

// JSON and CSV encodings of points, quadruples and sampled curves.

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "moebius/core.hpp"

namespace moebius {

/// {"kind":"finite","coords":[...]} or {"kind":"infinity"}; a bare array
/// or the string "inf" is accepted on input.
nlohmann::json point_to_json(const ExtendedPoint& p);
ExtendedPoint point_from_json(const nlohmann::json& j);

nlohmann::json quadruple_to_json(const Quadruple& q);
/// A four-element array of points, or an object with key "points".
Quadruple quadruple_from_json(const nlohmann::json& j);

/// Round-trip safe decimal form (17 significant digits).
std::string format_double(double x);

/// One CSV row per point: t, coordinates... ; ∞ is written as "inf" in every
/// coordinate column.
void write_curve_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<double>& t, const std::vector<ExtendedPoint>& points);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace moebius
