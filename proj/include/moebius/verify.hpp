#pragma once

// Registry of seeded numerical experiments, one per checkable statement, with
// machine-readable pass/fail reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "moebius/core.hpp"

namespace moebius {

struct SuiteConfig {
  std::uint64_t seed = 1;
  int k = 2;                  // Heisenberg model CH^k
  std::size_t samples = 0;    // 0: each suite uses its own default count
  std::map<std::string, double> tolerances;  // per-tag overrides
  int depth = 12;             // zigzag depth

  void validate() const;
};

struct SuiteReport {
  std::string tag;
  bool pass = false;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::size_t n = 0;
  std::int64_t runtime_ms = 0;
  std::optional<nlohmann::json> witness;  // worst-case input, kept on failure

  friend bool operator==(const SuiteReport&, const SuiteReport&) = default;
};

/// runtime_ms is written only when requested, so reports without it are
/// byte-identical across runs.
nlohmann::json to_json(const SuiteReport& r, bool with_runtime = false);
SuiteReport report_from_json(const nlohmann::json& j);

enum class SuiteGroup { Exact, ClosedForm, Limit, Negative };

const char* to_string(SuiteGroup g);

struct SuiteInfo {
  std::string tag;
  std::string anchor;       // label of the statement being checked
  std::string description;  // includes the quoted claim
  SuiteGroup group = SuiteGroup::Exact;
  double default_tolerance = 0.0;
  std::string model;        // "euclid" or "heis"
};

std::vector<SuiteInfo> list_suites();

SuiteReport run_suite(const std::string& tag, const SuiteConfig& config);

struct RunSummary {
  std::vector<SuiteReport> reports;  // registry order
  std::size_t passed = 0;
  std::size_t failed = 0;

  bool all_passed() const noexcept { return failed == 0; }
};

/// Runs the given tags (all registered suites when empty) on `threads`
/// workers; the reports do not depend on the worker count.
RunSummary run_all(const SuiteConfig& config, const std::vector<std::string>& tags = {},
                   unsigned threads = 0);

nlohmann::json to_json(const RunSummary& s, const SuiteConfig& config, bool with_runtime = false);

}  // namespace moebius
