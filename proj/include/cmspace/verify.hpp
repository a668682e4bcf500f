#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmspace/linalg.hpp"

namespace cmspace {

struct VerifyConfig {
  std::string suite = "all";
  int n_min = 1;
  int n_max = 4;
  int trials = 50;  // per size n
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  Cx tau{1.0, 0.0};
};

/// status is pass iff residual <= threshold. Lower-bound checks report
/// bound/value as residual against threshold 1.
struct CheckRecord {
  std::string name;
  std::string anchor;
  bool passed = false;
  double residual = 0.0;
  double threshold = 0.0;
  double runtime_ms = 0.0;
  std::string detail;
};

struct Report {
  VerifyConfig config;
  std::vector<CheckRecord> records;  // sorted by name

  int passed() const;
  int failed() const;
  bool all_passed() const { return failed() == 0; }
  nlohmann::json to_json() const;
};

inline constexpr int kReportSchemaVersion = 1;

struct CheckSpec {
  std::string name;
  std::string suite;
  std::function<CheckRecord(const VerifyConfig&)> run;
};

/// Every check, in a fixed order.
const std::vector<CheckSpec>& all_checks();
std::vector<std::string> suite_names();

/// Runs one named check and times it; throws InvalidArgument for unknown names.
CheckRecord run_check(const std::string& name, const VerifyConfig& cfg);

/// Runs the checks of cfg.suite ("all" for every suite).
Report run_verify(const VerifyConfig& cfg);

/// Parses "a..b" or "a" into [n_min, n_max].
std::pair<int, int> parse_n_range(const std::string& text);

}  // namespace cmspace
