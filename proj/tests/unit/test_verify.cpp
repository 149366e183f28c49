#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "moebius/verify.hpp"

using namespace moebius;

namespace {

// Statements with a lemma or equation label that some operation of the
// library implements; each must be covered by at least one suite.
const std::vector<std::string> kRequiredAnchors{
    "eq:PT_eq",
    "lem:mult_hermitian",
    "eq:koranyi_gauge",
    "pro:vert_flip",
    "lem:sinversion_minversion",
    "lem:sphere_sinversion",
    "cor:3c_4c",
    "pro:base_metric",
    "eq:busemann_flat",
    "eq:duality",
    "pro:busemann_affine",
    "lem:slope_symmetry",
    "lem:busemann_affine_zigzag",
    "lem:uspeed_parameter_zigzag",
    "lem:max_orthogonal",
    "lem:orthogonalization_procedure",
    "eq:area_law",
    "pro:lift_const_2",
    "lem:adding_lifts",
    "lem:coord_lift_triangle",
    "lem:xi_norm",
    "pro:complex_structure",
    "pro:comp_dist_function",
    "lem:homogeneous_dist_function",
    "pro:euclid_square_fiber",
    "lem:z_in_center",
    "lem:mean_geometric",
    "pro:unit_rcircle",
    "lem:equal_distances",
    "cor:circle_cover_twice",
    "lem:circle_rectifiable",
    "eq:quadratic_reduce",
    "pro:tangent_rcircle",
    "lem:complex_line",
    "lem:mu_distortion",
};

std::set<std::string> anchors() {
  std::set<std::string> out;
  for (const auto& s : list_suites()) out.insert(s.anchor);
  return out;
}

bool has_tag(const std::string& tag) {
  const auto all = list_suites();
  return std::any_of(all.begin(), all.end(), [&](const SuiteInfo& s) { return s.tag == tag; });
}

}  // namespace

TEST_CASE("registry") {
  const auto all = list_suites();
  CHECK(all.size() >= 25);
  CHECK(has_tag("lem:mean_geometric"));
  CHECK(has_tag("eq:koranyi_gauge"));
  CHECK(has_tag("prop:lift_const_2"));
  CHECK(has_tag("prop:comp_dist_function"));
  CHECK(has_tag("negative:L1-not-ptolemy"));
  std::set<std::string> tags;
  for (const auto& s : all) {
    CHECK(tags.insert(s.tag).second);
    CHECK_FALSE(s.description.empty());
  }
}

TEST_CASE("registry covers every implemented statement") {
  const auto have = anchors();
  for (const auto& a : kRequiredAnchors) {
    INFO(a);
    CHECK(have.count(a) == 1);
  }
}

TEST_CASE("unknown suite") {
  try {
    run_suite("lem:nonexistent", SuiteConfig{});
    FAIL("expected UnknownSuite");
  } catch (const MoebiusError& e) {
    CHECK(e.code() == ErrorCode::UnknownSuite);
  }
  SuiteConfig bad;
  bad.tolerances["lem:nonexistent"] = 1.0;
  CHECK_THROWS_AS(run_all(bad), MoebiusError);
}

TEST_CASE("config validation") {
  SuiteConfig c;
  c.k = 1;
  CHECK_THROWS_AS(c.validate(), MoebiusError);
  c.k = 2;
  c.depth = 0;
  CHECK_THROWS_AS(c.validate(), MoebiusError);
  c.depth = 12;
  c.tolerances["eq:koranyi_gauge"] = -1.0;
  CHECK_THROWS_AS(c.validate(), MoebiusError);
}

TEST_CASE("selected suites") {
  const SuiteConfig c;
  const auto pt = run_suite("eq:PT_eq/euclidean-circles", c);
  CHECK(pt.pass);
  CHECK(pt.worst_residual <= 1e-12);
  const auto lift = run_suite("prop:lift_const_2", c);
  CHECK(lift.pass);
  CHECK(lift.worst_residual <= 1e-6);
  CHECK(lift.n >= 20);
  const auto l1 = run_suite("negative:L1-not-ptolemy", c);
  CHECK(l1.pass);
  CHECK_FALSE(l1.witness.has_value());
}

TEST_CASE("tolerance overrides") {
  SuiteConfig c;
  c.tolerances["eq:busemann_flat"] = 0.0;
  c.tolerances["prop:vert_flip"] = 0.0;
  const auto flat = run_suite("eq:busemann_flat", c);
  CHECK_FALSE(flat.pass);
  CHECK(flat.tolerance == 0.0);
  REQUIRE(flat.witness.has_value());
  CHECK(flat.witness->contains("direction"));
  // The flip only negates and conjugates, so its residual is exactly zero.
  CHECK(run_suite("prop:vert_flip", c).pass);
}

TEST_CASE("json round trip") {
  SuiteReport r;
  r.tag = "eq:duality";
  r.pass = false;
  r.worst_residual = 0.1 + 0.2;
  r.tolerance = 1e-4;
  r.n = 20;
  r.runtime_ms = 17;
  r.witness = nlohmann::json{{"x", {1.0, 2.0, 3.0}}};
  CHECK(report_from_json(to_json(r, true)) == r);
  CHECK(report_from_json(nlohmann::json::parse(to_json(r, true).dump())) == r);
  const auto no_time = to_json(r);
  CHECK_FALSE(no_time.contains("runtime_ms"));
  SuiteReport inf = r;
  inf.worst_residual = INFINITY;
  inf.runtime_ms = 0;
  CHECK(report_from_json(nlohmann::json::parse(to_json(inf).dump())) == inf);
}

TEST_CASE("reports do not depend on the worker count") {
  SuiteConfig c;
  c.seed = 7;
  const std::vector<std::string> tags{"ptolemy:koranyi-scan", "eq:duality", "lem:mean_geometric",
                                      "prop:complex_structure", "lem:mu_distortion"};
  const auto one = run_all(c, tags, 1);
  const auto three = run_all(c, tags, 3);
  CHECK(to_json(one, c).dump() == to_json(three, c).dump());
  CHECK(one.all_passed());
  c.seed = 8;
  const auto other = run_all(c, tags, 2);
  CHECK(to_json(other, c).dump() != to_json(one, c).dump());
  CHECK(other.passed == one.passed);
}
