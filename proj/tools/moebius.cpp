// moebius: run verification suites, evaluate cross-ratios and inversions, and
// sample circles, zigzags and polygon lifts.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "moebius/euclidean.hpp"
#include "moebius/geodesy.hpp"
#include "moebius/heisenberg.hpp"
#include "moebius/io.hpp"
#include "moebius/vec.hpp"
#include "moebius/verify.hpp"

using namespace moebius;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct ModelFlags {
  std::string model = "heis";
  int k = 2;
  std::size_t n = 2;
};

void add_model_flags(CLI::App* app, ModelFlags& f) {
  app->add_option("--model", f.model, "Boundary model")
      ->check(CLI::IsMember({"euclid", "heis"}))
      ->capture_default_str();
  app->add_option("--k", f.k, "Heisenberg model of CH^k (base C^(k-1))")->capture_default_str();
  app->add_option("--n", f.n, "Euclidean dimension of R^n")->capture_default_str();
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw MoebiusError(ErrorCode::InvalidArgument, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw MoebiusError(ErrorCode::InvalidArgument, what + " is not valid JSON: " + e.what());
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MoebiusError(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
  out << content;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw MoebiusError(ErrorCode::InvalidArgument, "bad number '" + s + "'");
  return v;
}

/// Literals such as 1, -i, 2.5i, 0.6+0.8i, 1e-3-2i.
Complex parse_complex(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw MoebiusError(ErrorCode::InvalidArgument, "empty complex literal");
  if (s.back() != 'i') return {parse_real(s), 0.0};
  s.pop_back();
  std::size_t split_at = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split_at = i;
      break;
    }
  }
  auto imag = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (split_at == std::string::npos) return {0.0, imag(s)};
  return {parse_real(s.substr(0, split_at)), imag(s.substr(split_at))};
}

/// Base vector from "c1:c2:..." (complex entries in the Heisenberg model,
/// real entries in R^n).
std::vector<double> parse_base_vector(const std::string& s, const ModelFlags& f) {
  const auto parts = split(s, ':');
  std::vector<double> out;
  if (f.model == "heis") {
    for (const auto& p : parts) {
      const Complex c = parse_complex(p);
      out.push_back(c.real());
      out.push_back(c.imag());
    }
  } else {
    for (const auto& p : parts) out.push_back(parse_real(p));
  }
  return out;
}

std::unique_ptr<LineModel> make_model(const ModelFlags& f) {
  if (f.model == "heis") return std::make_unique<HeisenbergModel>(f.k);
  if (f.n < 1) throw MoebiusError(ErrorCode::InvalidArgument, "n must be positive");
  return std::make_unique<EuclideanModel>(f.n);
}

std::vector<std::string> coordinate_header(const LineModel& m, const ModelFlags& f, const std::string& first) {
  std::vector<std::string> h{first};
  if (f.model == "heis") {
    for (std::size_t j = 0; j < m.base_dim() / 2; ++j) {
      h.push_back("re_z" + std::to_string(j + 1));
      h.push_back("im_z" + std::to_string(j + 1));
    }
    h.push_back("h");
  } else {
    for (std::size_t j = 0; j < m.base_dim(); ++j) h.push_back("x" + std::to_string(j + 1));
  }
  return h;
}

void check_point(const ExtendedPoint& p, std::size_t dim) {
  if (p.is_finite() && p.dim() != dim) {
    throw MoebiusError(ErrorCode::DimensionMismatch, "point " + describe(p) + " has " + std::to_string(p.dim()) +
                                                         " coordinates, expected " + std::to_string(dim));
  }
}

std::size_t point_dim(const ModelFlags& f) {
  return f.model == "heis" ? static_cast<std::size_t>(2 * (f.k - 1) + 1) : f.n;
}

std::string summary_row(const std::vector<std::pair<std::string, double>>& cells) {
  std::ostringstream out;
  std::vector<std::string> row{"summary"};
  for (const auto& [k, v] : cells) row.push_back(k + "=" + format_double(v));
  write_csv_row(out, row);
  return out.str();
}

// ---------------------------------------------------------------------------
// check

struct CheckFlags {
  ModelFlags model;
  bool model_given = false;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  int depth = 12;
  double tol = -1.0;
  std::vector<std::string> only;
  std::string output;
  bool timings = false;
  bool list = false;
  unsigned threads = 0;
};

int cmd_check(const CheckFlags& f) {
  if (f.list) {
    for (const auto& s : list_suites()) {
      std::printf("%-34s %-12s %-7s tol=%-8g %s\n", s.tag.c_str(), to_string(s.group), s.model.c_str(),
                  s.default_tolerance, s.description.c_str());
    }
    return 0;
  }
  SuiteConfig cfg;
  cfg.seed = f.seed;
  cfg.k = f.model.k;
  cfg.samples = f.samples;
  cfg.depth = f.depth;
  std::vector<std::string> tags = f.only;
  if (tags.empty() && f.model_given) {
    for (const auto& s : list_suites())
      if (s.model == f.model.model) tags.push_back(s.tag);
  }
  if (f.tol >= 0.0) {
    const auto& selected = tags.empty() ? [] {
      std::vector<std::string> all;
      for (const auto& s : list_suites()) all.push_back(s.tag);
      return all;
    }() : tags;
    for (const auto& t : selected) cfg.tolerances[t] = f.tol;
  }
  const RunSummary summary = run_all(cfg, tags, f.threads);

  for (const auto& r : summary.reports) {
    std::printf("%-4s  %-34s residual=%-12.4g tol=%-8.2g n=%zu", r.pass ? "PASS" : "FAIL", r.tag.c_str(),
                r.worst_residual, r.tolerance, r.n);
    if (f.timings) std::printf("  %lld ms", static_cast<long long>(r.runtime_ms));
    std::printf("\n");
  }
  std::printf("%zu passed, %zu failed (k=%d, seed=%llu)\n", summary.passed, summary.failed, cfg.k,
              static_cast<unsigned long long>(cfg.seed));
  if (!f.output.empty()) {
    if (ends_with(f.output, ".csv")) {
      std::ostringstream out;
      write_csv_row(out, {"tag", "pass", "worst_residual", "tolerance", "n"});
      for (const auto& r : summary.reports) {
        write_csv_row(out, {r.tag, r.pass ? "1" : "0", format_double(r.worst_residual), format_double(r.tolerance),
                            std::to_string(r.n)});
      }
      emit(f.output, out.str());
    } else {
      emit(f.output, to_json(summary, cfg, f.timings).dump(2) + "\n");
    }
  }
  return summary.all_passed() ? 0 : kExitFailure;
}

// ---------------------------------------------------------------------------
// crt

struct CrtFlags {
  ModelFlags model;
  std::string input;
  double tol = 1e-12;
  std::string output;
};

int cmd_crt(const CrtFlags& f) {
  const Quadruple q = quadruple_from_json(parse_json(read_input(f.input), "quadruple"));
  for (const auto& p : q) check_point(p, point_dim(f.model));
  if (!is_admissible(q)) throw MoebiusError(ErrorCode::InadmissibleQuadruple, "a point occurs three or four times");
  const auto model = make_model(f.model);
  const auto t = cross_ratio(model->metric(), q);
  const auto cls = classify_triple(t, f.tol);
  const char* tag = cls.tag == PtolemyTag::BoundaryDelta ? "boundary"
                    : cls.tag == PtolemyTag::InteriorDelta ? "interior"
                                                           : "violation";
  if (!f.output.empty() && ends_with(f.output, ".json")) {
    emit(f.output, json{{"triple", {t.a, t.b, t.c}}, {"class", tag}, {"slack", cls.slack}}.dump(2) + "\n");
  } else {
    emit(f.output, format_double(t.a) + ":" + format_double(t.b) + ":" + format_double(t.c) + " " + tag + "\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// invert

struct InvertFlags {
  ModelFlags model;
  std::string input;
  std::string center;
  std::string center2;
  double radius = 1.0;
  std::string output;
};

int cmd_invert(const InvertFlags& f) {
  const json in = parse_json(read_input(f.input), "input");
  const bool single = !(in.is_array() && !in.empty() && !in[0].is_number());
  std::vector<ExtendedPoint> pts;
  if (single) {
    pts.push_back(point_from_json(in));
  } else {
    for (const auto& p : in) pts.push_back(point_from_json(p));
  }
  const std::size_t dim = point_dim(f.model);
  for (const auto& p : pts) check_point(p, dim);
  const ExtendedPoint center = f.center.empty() ? ExtendedPoint::finite(std::vector<double>(dim, 0.0))
                                                : point_from_json(parse_json(f.center, "--center"));
  check_point(center, dim);
  MoebiusMap inv;
  if (f.model.model == "heis") {
    const HeisenbergModel m(f.model.k);
    const ExtendedPoint other = f.center2.empty() ? ExtendedPoint::infinity()
                                                  : point_from_json(parse_json(f.center2, "--swap-with"));
    check_point(other, dim);
    inv = m.space_inversion(center, other, f.radius);
  } else {
    if (!f.center2.empty()) throw MoebiusError(ErrorCode::InvalidArgument, "--swap-with needs the Heisenberg model");
    inv = euclid_inversion(center, f.radius);
  }
  json out = json::array();
  for (const auto& p : pts) out.push_back(point_to_json(inv(p)));
  emit(f.output, (single ? out[0] : out).dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// circle

struct CircleFlags {
  ModelFlags model;
  bool unit = false;
  double radius = 1.0;
  std::string line_through;
  std::string line_dir;
  std::string pole;
  double inv_radius = 1.0;
  std::string c_through;
  std::string through;
  std::size_t samples = 256;
  std::string output;
};

int cmd_circle(const CircleFlags& f) {
  if (f.samples < 4) throw MoebiusError(ErrorCode::InvalidArgument, "need at least 4 samples");
  const std::size_t dim = point_dim(f.model);
  auto point = [&](const std::string& s) {
    const auto p = point_from_json(parse_json(s, "point"));
    check_point(p, dim);
    return p;
  };
  auto points = [&](const std::string& s, std::size_t count, const char* flag) {
    const json a = parse_json(s, flag);
    if (!a.is_array() || a.size() != count)
      throw MoebiusError(ErrorCode::TooFewPoints, std::string(flag) + " needs an array of " + std::to_string(count) + " points");
    std::vector<ExtendedPoint> out;
    for (const auto& p : a) {
      out.push_back(point_from_json(p));
      check_point(out.back(), dim);
    }
    return out;
  };
  ClosedCurve curve;
  std::vector<std::pair<std::string, double>> summary;
  const auto model = make_model(f.model);

  if (f.model.model == "euclid") {
    const auto p = points(f.through, 3, "--through");
    const Circle c = circle_through(p[0], p[1], p[2]);
    curve = {[c](double a) { return c.at(a); }, "circle"};
    if (!c.is_line) summary.emplace_back("radius", c.radius);
  } else {
    const auto& m = static_cast<const HeisenbergModel&>(*model);
    if (!f.c_through.empty()) {
      const auto p = points(f.c_through, 2, "--c-through");
      curve = m.c_circle_through(p[0], p[1]).curve;
    } else if (!f.line_through.empty() || !f.pole.empty()) {
      if (f.line_through.empty() || f.line_dir.empty() || f.pole.empty()) {
        throw MoebiusError(ErrorCode::InvalidArgument, "--line-through, --line-dir and --pole go together");
      }
      const Line l = m.line(point(f.line_through), parse_base_vector(f.line_dir, f.model));
      curve = m.r_circle_from_line(l, m.space_inversion(point(f.pole), ExtendedPoint::infinity(), f.inv_radius));
    } else {
      const double r = f.unit ? 1.0 : f.radius;
      curve = m.unit_r_circle(r);
      const auto rep = circle_diagnostics(m, curve, std::vector<double>(m.base_dim(), 0.0));
      summary.emplace_back("radius", rep.radius);
      summary.emplace_back("unit_radius_error", rep.unit_radius);
      summary.emplace_back("mean_geometric_error", rep.mean_geometric);
    }
  }

  std::vector<double> t;
  std::vector<ExtendedPoint> pts;
  for (std::size_t j = 0; j < f.samples; ++j) {
    t.push_back(2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(f.samples));
    pts.push_back(curve(t.back()));
  }
  std::vector<ExtendedPoint> finite;
  for (std::size_t j = 0; j < 12; ++j) {
    const auto p = curve(2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / 12.0);
    if (p.is_finite()) finite.push_back(p);
  }
  summary.emplace_back("ptolemy_residual", circle_residual(model->metric(), finite));

  std::ostringstream out;
  write_curve_csv(out, coordinate_header(*model, f.model, "angle"), t, pts);
  out << summary_row(summary);
  emit(f.output, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// zigzag

struct ZigzagFlags {
  ModelFlags model;
  std::string dirs;
  std::string steps;
  int depth = 12;
  double t_end = 0.0;
  std::string output;
};

int cmd_zigzag(const ZigzagFlags& f) {
  const auto model = make_model(f.model);
  ZigzagSpec spec;
  spec.o = ExtendedPoint::finite(std::vector<double>(point_dim(f.model), 0.0));
  for (const auto& d : split(f.dirs, ',')) spec.directions.push_back(parse_base_vector(d, f.model));
  for (const auto& s : split(f.steps, ',')) spec.steps.push_back(parse_real(s));
  spec.depth = f.depth;
  if (spec.directions.size() != spec.steps.size()) {
    throw MoebiusError(ErrorCode::InvalidArgument, "--dirs and --steps must have the same length");
  }
  spec.validate(*model);
  double s1 = 0.0, s2 = 0.0;
  for (double s : spec.steps) {
    s1 += s;
    s2 += s * s;
  }
  const double t_end = f.t_end > 0.0 ? f.t_end : s1;
  const Polyline poly = zigzag(*model, spec, 0.0, t_end);
  const double speed = zigzag_endpoint_speed(*model, spec, t_end);

  std::ostringstream out;
  write_curve_csv(out, coordinate_header(*model, f.model, "t"), poly.t, poly.vertices);
  out << summary_row({{"t_end", t_end}, {"endpoint_speed", speed}, {"orthogonal_frame_speed", std::sqrt(s2) / s1}});
  emit(f.output, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// lift

struct LiftFlags {
  ModelFlags model;
  double square = 0.0;
  std::vector<double> rect;
  std::string u;
  std::string v;
  int orientation = 1;
  double start_h = 0.0;
  std::string output;
};

int cmd_lift(const LiftFlags& f) {
  if (f.model.model != "heis") throw MoebiusError(ErrorCode::InvalidArgument, "lifting needs the Heisenberg model");
  const HeisenbergModel m(f.model.k);
  const auto u = f.u.empty() ? m.to_real(m.unit_direction(0)) : parse_base_vector(f.u, f.model);
  const auto v = f.v.empty() ? m.to_real(m.unit_direction(1)) : parse_base_vector(f.v, f.model);
  if (u.size() != m.base_dim() || v.size() != m.base_dim()) {
    throw MoebiusError(ErrorCode::DimensionMismatch, "--u and --v must be base vectors");
  }
  double w = 1.0, h = 1.0;
  if (f.square > 0.0) {
    w = h = f.square;
  } else if (f.rect.size() == 2) {
    w = f.rect[0];
    h = f.rect[1];
  } else if (!f.rect.empty() || f.square < 0.0) {
    throw MoebiusError(ErrorCode::InvalidArgument, "--square needs a positive side, --rect two sides");
  }
  const std::vector<double> zero(m.base_dim(), 0.0);
  BasePolygon p;
  p.vertices = {zero, vec::scale(u, w), vec::axpy(vec::scale(u, w), h, v), vec::scale(v, h)};
  p.orientation = f.orientation;
  const ExtendedPoint start = m.fiber_point(zero, f.start_h);
  const LiftResult r = lift_polygon(m, p, start);

  // Trace of the lift, vertex by vertex.
  std::vector<double> steps{0.0};
  std::vector<ExtendedPoint> trace{start};
  ExtendedPoint x = start;
  const std::size_t n = p.vertices.size();
  for (std::size_t step = 1; step <= n; ++step) {
    const auto idx = (static_cast<std::ptrdiff_t>(step) * f.orientation % static_cast<std::ptrdiff_t>(n) + n) % n;
    x = m.fiber_transfer(x, p.vertices[idx]);
    steps.push_back(static_cast<double>(step));
    trace.push_back(x);
  }
  std::ostringstream out;
  write_curve_csv(out, coordinate_header(m, f.model, "step"), steps, trace);
  out << summary_row({{"displacement", r.displacement}, {"fiber_shift", r.fiber_shift}, {"sign", r.sign}});
  emit(f.output, out.str());
  return 0;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("MOEBIUS_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used == std::strlen(s)) return v;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("MOEBIUS_SEED", "must be an unsigned integer");
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moebius geometry toolkit: verification suites, cross-ratios, inversions and sampled curves."};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  CheckFlags check;
  CrtFlags crt;
  InvertFlags invert;
  CircleFlags circle;
  ZigzagFlags zz;
  LiftFlags lift;

  auto* c = app.add_subcommand("check", "Run the verification suites (Ptolemy property, Moebius invariance, "
                                        "Busemann functions, zigzags, lifting constant, R-circles)");
  add_model_flags(c, check.model);
  c->add_option("--seed", check.seed, "Base seed (default: MOEBIUS_SEED or 1)");
  c->add_option("--samples", check.samples, "Override every suite's sample count");
  c->add_option("--depth", check.depth, "Zigzag depth")->capture_default_str();
  c->add_option("--tol", check.tol, "Tolerance applied to every selected suite");
  c->add_option("--only", check.only, "Comma-separated suite tags")->delimiter(',');
  c->add_option("-o,--output", check.output, "Report file (.json or .csv)");
  c->add_flag("--timings", check.timings, "Include per-suite runtimes");
  c->add_flag("--list", check.list, "List the registered suites");
  c->add_option("--threads", check.threads, "Worker threads (0: hardware concurrency)");

  auto* r = app.add_subcommand("crt", "Cross-ratio triple (d(x,y)d(z,u) : d(x,z)d(y,u) : d(x,u)d(y,z)) of a "
                                      "quadruple, with its Ptolemy class");
  add_model_flags(r, crt.model);
  r->add_option("input", crt.input, "JSON file with four points (default: stdin)");
  r->add_option("--tol", crt.tol, "Classification tolerance")->capture_default_str();
  r->add_option("-o,--output", crt.output, "Output file (.json for structured output)");

  auto* i = app.add_subcommand("invert", "Apply a space inversion (Heisenberg) or a classical inversion (R^n)");
  add_model_flags(i, invert.model);
  i->add_option("input", invert.input, "JSON point or array of points (default: stdin)");
  i->add_option("--center", invert.center, "Center as JSON (default: origin)");
  i->add_option("--swap-with", invert.center2, "Second pole as JSON (Heisenberg only; default: infinity)");
  i->add_option("--radius", invert.radius, "Radius of the invariant sphere")->capture_default_str();
  i->add_option("-o,--output", invert.output, "Output JSON file");

  auto* ci = app.add_subcommand("circle", "Sample an R-circle, a C-circle or a Euclidean circle as CSV");
  add_model_flags(ci, circle.model);
  ci->add_flag("--unit", circle.unit, "Unit R-circle centered at the origin");
  ci->add_option("--radius", circle.radius, "Radius of the R-circle centered at the origin")->capture_default_str();
  ci->add_option("--line-through", circle.line_through, "Point (JSON) of the horizontal line to invert");
  ci->add_option("--line-dir", circle.line_dir, "Direction of that line, complex entries separated by ':'");
  ci->add_option("--pole", circle.pole, "Pole (JSON) of the inversion applied to the line");
  ci->add_option("--inv-radius", circle.inv_radius, "Radius of that inversion")->capture_default_str();
  ci->add_option("--c-through", circle.c_through, "JSON array of two points of a C-circle");
  ci->add_option("--through", circle.through, "JSON array of three points of a Euclidean circle");
  ci->add_option("--samples", circle.samples, "Number of samples")->capture_default_str();
  ci->add_option("-o,--output", circle.output, "CSV output file");

  auto* z = app.add_subcommand("zigzag", "Sample the zigzag polyline through the origin as CSV");
  add_model_flags(z, zz.model);
  z->add_option("--dirs", zz.dirs, "Unit directions, e.g. 1,i (entries of one direction separated by ':')")->required();
  z->add_option("--steps", zz.steps, "Nonnegative step lengths, e.g. 1,1")->required();
  z->add_option("--depth", zz.depth, "Refinement depth p (steps s_i / 2^(p-1))")->capture_default_str();
  z->add_option("--t-end", zz.t_end, "End parameter (default: sum of steps)");
  z->add_option("-o,--output", zz.output, "CSV output file");

  auto* l = app.add_subcommand("lift", "Lift a rectangle of the base and report its holonomy displacement");
  add_model_flags(l, lift.model);
  l->add_option("--square", lift.square, "Side of a square spanned by u and v");
  l->add_option("--rect", lift.rect, "Sides w,h of a rectangle spanned by u and v")->delimiter(',')->expected(2);
  l->add_option("--u", lift.u, "First side direction (default: 1)");
  l->add_option("--v", lift.v, "Second side direction (default: i)");
  l->add_option("--orientation", lift.orientation, "+1 or -1")->check(CLI::IsMember({1, -1}))->capture_default_str();
  l->add_option("--start-h", lift.start_h, "Fiber coordinate of the start point")->capture_default_str();
  l->add_option("-o,--output", lift.output, "CSV output file");

  try {
    check.seed = default_seed();
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  check.model_given = c->count("--model") > 0;

  try {
    if (*c) return cmd_check(check);
    if (*r) return cmd_crt(crt);
    if (*i) return cmd_invert(invert);
    if (*ci) return cmd_circle(circle);
    if (*z) return cmd_zigzag(zz);
    if (*l) return cmd_lift(lift);
  } catch (const MoebiusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
