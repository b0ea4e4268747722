#pragma once

#include <string>

#include "refaware/report.hpp"

namespace refaware::testing {

// Canonical text with the run-dependent fields blanked: created_at and each
// pair's measured wall time.
inline std::string masked_canonical(const AnalysisReport& report) {
  nlohmann::json j = to_json(report);
  j["created_at"] = "";
  for (auto& p : j["pairs"]) p["timing"]["wall_seconds"] = 0.0;
  return canonical_dump(j);
}

}  // namespace refaware::testing
