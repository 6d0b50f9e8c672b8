#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "thinflow/harness/config.hpp"

namespace thinflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  RunConfig config = default_config();
  std::set<int> only;  // empty runs all criteria
};

inline constexpr int kCriterionCount = 13;

// Runs the selected criteria in order; on_result is called as each one finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// One line: "[PASS] AC03 tangency: ... (0.52 s)".
std::string format_result(const CriterionResult& r);

}  // namespace thinflow
