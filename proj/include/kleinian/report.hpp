#pragma once

#include <string>
#include <vector>

#include "kleinian/types.hpp"

namespace kleinian {

struct ResidualReport {
  std::string suite;
  std::string identity;
  std::string equation;   // e.g. "2-17"
  std::string inputs;     // digest, e.g. "seed=1;pt=0;m=5;n=3"
  Real residual = 0;
  Real tolerance = 0;
  enum class Verdict { pass, fail, diagnostic } verdict = Verdict::diagnostic;
  Real wall_time_ms = 0;
};

// gating record: verdict from residual <= tolerance
ResidualReport make_gating(const std::string& suite, const std::string& identity,
                           const std::string& equation, const std::string& inputs, Real residual,
                           Real tolerance);
// diagnostic record: never affects exit status
ResidualReport make_diagnostic(const std::string& suite, const std::string& identity,
                               const std::string& equation, const std::string& inputs,
                               Real residual, Real tolerance);

std::string verdict_name(ResidualReport::Verdict v);

// deterministic ordering by (suite, identity, inputs)
void sort_reports(std::vector<ResidualReport>& reports);

std::string reports_to_json(const std::vector<ResidualReport>& reports);
std::string reports_to_csv(const std::vector<ResidualReport>& reports);

// parse back (used by tests and the determinism check)
std::vector<ResidualReport> reports_from_json(const std::string& text);

// write text to path atomically (tmp file + rename); throws on IO failure
void write_file_atomic(const std::string& path, const std::string& text);

}  // namespace kleinian
