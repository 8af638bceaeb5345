// verify: command-line harness for the hyperelliptic function library.
//
//   verify run   --config cfg.json [--seeds 1,2,3] [--suites a,b] [--max-m 8]
//                [--out report.json] [--csv report.csv]
//                [--cache-periods periods.json] [--points N] [--timings]
//   verify curve --seed N [--genus 2] --out curve.json
//
// Exit codes: 0 all gating records pass, 1 gating failure, 2 config error,
// 3 pipeline construction failure, 4 io error. VERIFY_LOG in {quiet, info,
// debug} controls stderr chatter.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kleinian/curve.hpp"
#include "kleinian/periods.hpp"
#include "kleinian/report.hpp"
#include "kleinian/suites.hpp"

namespace {

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoull(item));
  }
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"residual verification harness for genus <= 2 Kleinian functions"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "run verification suites");
  std::string config_path, seeds_flag, suites_flag, out_flag, csv_flag, cache_flag;
  int max_m_flag = -1, points_flag = -1;
  bool timings = false;
  run->add_option("--config", config_path, "JSON config file");
  run->add_option("--seeds", seeds_flag, "comma-separated curve seeds");
  run->add_option("--suites", suites_flag, "comma-separated suite subset");
  run->add_option("--max-m", max_m_flag, "largest m in the determinant recursion sweep");
  run->add_option("--points", points_flag, "points per curve");
  run->add_option("--out", out_flag, "report path (JSON)");
  run->add_option("--csv", csv_flag, "CSV mirror path");
  run->add_option("--cache-periods", cache_flag, "period cache file");
  run->add_flag("--timings", timings, "record wall times (breaks bit-for-bit determinism)");

  // ---- curve ----
  auto* curve_cmd = app.add_subcommand("curve", "emit a seeded curve as JSON");
  std::uint64_t curve_seed = 1;
  int curve_genus = 2;
  std::string curve_out = "curve.json";
  curve_cmd->add_option("--seed", curve_seed, "seed")->required();
  curve_cmd->add_option("--genus", curve_genus, "genus (1 or 2)");
  curve_cmd->add_option("--out", curve_out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (curve_cmd->parsed()) {
      const kleinian::Curve c = kleinian::random_curve(curve_seed, curve_genus);
      kleinian::write_file_atomic(curve_out, kleinian::curve_to_json(c) + "\n");
      return 0;
    }

    kleinian::SuiteConfig cfg;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) {
        std::cerr << "config error: cannot open " << config_path << "\n";
        return 2;
      }
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = kleinian::config_from_json(ss.str());
    }
    if (!seeds_flag.empty()) cfg.seeds = parse_seed_list(seeds_flag);
    if (!suites_flag.empty()) cfg.suites = parse_name_list(suites_flag);
    if (max_m_flag > 0) cfg.max_m = max_m_flag;
    if (points_flag > 0) cfg.points_per_curve = points_flag;
    if (!out_flag.empty()) cfg.out_path = out_flag;
    if (!csv_flag.empty()) cfg.csv_path = csv_flag;
    if (!cache_flag.empty()) cfg.cache_periods_path = cache_flag;
    cfg.timings = timings;
    if (cfg.max_m < 2 || cfg.points_per_curve < 1) {
      std::cerr << "config error: max_m >= 2 and points_per_curve >= 1 required\n";
      return 2;
    }
    return kleinian::run_harness(cfg);
  } catch (const kleinian::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const kleinian::error& e) {
    std::cerr << "pipeline error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
