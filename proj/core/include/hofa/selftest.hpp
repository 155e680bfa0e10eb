#pragma once

#include <string>
#include <vector>

namespace hofa {

/// One verification criterion outcome: measured values in `detail`, the
/// pinned tolerance restated in `claim`.
struct SelfTestResult {
  std::string name;
  std::string claim;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full pinned verification suite in order. Criteria never lower
/// their tolerances to pass; a red entry reports the measured value that
/// missed.
std::vector<SelfTestResult> run_selftests();

}  // namespace hofa
