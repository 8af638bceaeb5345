#include "kleinian/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace kleinian {

ResidualReport make_gating(const std::string& suite, const std::string& identity,
                           const std::string& equation, const std::string& inputs, Real residual,
                           Real tolerance) {
  ResidualReport r;
  r.suite = suite;
  r.identity = identity;
  r.equation = equation;
  r.inputs = inputs;
  r.residual = residual;
  r.tolerance = tolerance;
  r.verdict = (residual <= tolerance) ? ResidualReport::Verdict::pass
                                      : ResidualReport::Verdict::fail;
  return r;
}

ResidualReport make_diagnostic(const std::string& suite, const std::string& identity,
                               const std::string& equation, const std::string& inputs,
                               Real residual, Real tolerance) {
  ResidualReport r;
  r.suite = suite;
  r.identity = identity;
  r.equation = equation;
  r.inputs = inputs;
  r.residual = residual;
  r.tolerance = tolerance;
  r.verdict = ResidualReport::Verdict::diagnostic;
  return r;
}

std::string verdict_name(ResidualReport::Verdict v) {
  switch (v) {
    case ResidualReport::Verdict::pass: return "pass";
    case ResidualReport::Verdict::fail: return "fail";
    default: return "diagnostic";
  }
}

void sort_reports(std::vector<ResidualReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const ResidualReport& a, const ResidualReport& b) {
                     if (a.suite != b.suite) return a.suite < b.suite;
                     if (a.identity != b.identity) return a.identity < b.identity;
                     return a.inputs < b.inputs;
                   });
}

std::string reports_to_json(const std::vector<ResidualReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ResidualReport& r : reports) {
    nlohmann::ordered_json j;
    j["suite"] = r.suite;
    j["identity"] = r.identity;
    j["equation"] = r.equation;
    j["inputs"] = r.inputs;
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    j["verdict"] = verdict_name(r.verdict);
    j["wall_time_ms"] = r.wall_time_ms;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

namespace {
std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}
}  // namespace

std::string reports_to_csv(const std::vector<ResidualReport>& reports) {
  std::string out = "suite,identity,equation,inputs,residual,tolerance,verdict,wall_time_ms\n";
  char buf[64];
  for (const ResidualReport& r : reports) {
    out += csv_escape(r.suite) + "," + csv_escape(r.identity) + "," + csv_escape(r.equation) +
           "," + csv_escape(r.inputs) + ",";
    std::snprintf(buf, sizeof(buf), "%.17g", r.residual);
    out += buf;
    out += ",";
    std::snprintf(buf, sizeof(buf), "%.17g", r.tolerance);
    out += buf;
    out += "," + verdict_name(r.verdict) + ",";
    std::snprintf(buf, sizeof(buf), "%.17g", r.wall_time_ms);
    out += buf;
    out += "\n";
  }
  return out;
}

std::vector<ResidualReport> reports_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<ResidualReport> out;
  for (const auto& j : arr) {
    ResidualReport r;
    r.suite = j.at("suite").get<std::string>();
    r.identity = j.at("identity").get<std::string>();
    r.equation = j.at("equation").get<std::string>();
    r.inputs = j.at("inputs").get<std::string>();
    r.residual = j.at("residual").get<Real>();
    r.tolerance = j.at("tolerance").get<Real>();
    const std::string v = j.at("verdict").get<std::string>();
    r.verdict = v == "pass" ? ResidualReport::Verdict::pass
                : v == "fail" ? ResidualReport::Verdict::fail
                              : ResidualReport::Verdict::diagnostic;
    r.wall_time_ms = j.at("wall_time_ms").get<Real>();
    out.push_back(r);
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw error("cannot open output file: " + tmp);
    f << text;
    if (!f.good()) throw error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw error("rename failed: " + path);
  }
}

}  // namespace kleinian
