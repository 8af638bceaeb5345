#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kleinian/report.hpp"
#include "kleinian/types.hpp"

namespace kleinian {

struct SuiteConfig {
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::optional<std::string> curve_file;  // overrides seeds when set
  std::vector<std::string> suites;        // empty = all
  int max_m = 8;
  int points_per_curve = 3;
  std::map<std::string, Real> tolerance_overrides;  // suite -> tolerance
  std::string out_path = "report.json";
  std::optional<std::string> csv_path;
  std::optional<std::string> cache_periods_path;
  bool timings = false;
};

const std::vector<std::string>& all_suite_names();

SuiteConfig config_from_json(const std::string& text);

// runs the selected suites and returns the records (deterministic order)
std::vector<ResidualReport> run_suites(const SuiteConfig& cfg);

// full harness run: executes, writes the report (and CSV mirror when asked),
// returns the process exit code (0 ok, 1 gating failure, 2 config error,
// 3 pipeline failure, 4 io failure)
int run_harness(const SuiteConfig& cfg);

}  // namespace kleinian
