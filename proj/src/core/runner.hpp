#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dlab {

// One acceptance criterion outcome.
struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<CriterionResult> run_acceptance();

// Batch commands; params are schema-checked, reports are JSON.
// Commands: count, spectral, gkm-verify, wick-verify, jacobian-mc,
// virasoro-check, full-suite.
nlohmann::json run_command(const std::string& command, const nlohmann::json& params);

}  // namespace dlab
