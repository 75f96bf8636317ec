#pragma once

#include <string>
#include <vector>

namespace qlens {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast internal-consistency checks across all modules (well under a
/// minute on one core). Deterministic: fixed seeds, reduced grids.
std::vector<CheckResult> run_validation();

}  // namespace qlens
