#include "moebius/io.hpp"

#include <cmath>
#include <cstdio>

namespace moebius {

using nlohmann::json;

json point_to_json(const ExtendedPoint& p) {
  if (p.is_infinity()) return json{{"kind", "infinity"}};
  return json{{"kind", "finite"}, {"coords", std::vector<double>(p.coords().begin(), p.coords().end())}};
}

ExtendedPoint point_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "∞") return ExtendedPoint::infinity();
    throw MoebiusError(ErrorCode::InvalidArgument, "unknown point literal '" + s + "'");
  }
  if (j.is_array()) return ExtendedPoint::finite(j.get<std::vector<double>>());
  if (!j.is_object() || !j.contains("kind"))
    throw MoebiusError(ErrorCode::InvalidArgument, "point must be an object with a kind");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "infinity") return ExtendedPoint::infinity();
  if (kind == "finite") return ExtendedPoint::finite(j.at("coords").get<std::vector<double>>());
  throw MoebiusError(ErrorCode::InvalidArgument, "unknown point kind '" + kind + "'");
}

json quadruple_to_json(const Quadruple& q) {
  json a = json::array();
  for (const auto& p : q) a.push_back(point_to_json(p));
  return a;
}

Quadruple quadruple_from_json(const json& j) {
  const json& a = j.is_object() ? j.at("points") : j;
  if (!a.is_array() || a.size() != 4)
    throw MoebiusError(ErrorCode::InvalidArgument, "a quadruple needs exactly four points");
  Quadruple q;
  for (std::size_t i = 0; i < 4; ++i) q[i] = point_from_json(a[i]);
  return q;
}

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<double>& t, const std::vector<ExtendedPoint>& points) {
  if (t.size() != points.size())
    throw MoebiusError(ErrorCode::DimensionMismatch, "parameter and point counts differ");
  write_csv_row(out, header);
  const std::size_t cols = header.size() - 1;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<std::string> row{format_double(t[i])};
    for (std::size_t c = 0; c < cols; ++c)
      row.push_back(points[i].is_infinity() ? "inf" : format_double(points[i][c]));
    write_csv_row(out, row);
  }
}

}  // namespace moebius
