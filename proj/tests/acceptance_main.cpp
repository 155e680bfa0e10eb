/// Acceptance gate: runs every library self-test and prints one verdict line
/// per criterion. Exits nonzero when any criterion fails, so the suite stays
/// honest under ctest.

#include "hofa/selftest.hpp"

#include <cstdio>

int main() {
  std::vector<hofa::SelfTestResult> results = hofa::run_selftests();
  int failures = 0;
  for (const hofa::SelfTestResult& r : results) {
    std::printf("%s %-24s %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                r.seconds);
    std::printf("     claim: %s\n", r.claim.c_str());
    failures += !r.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failures, results.size());
  return failures == 0 ? 0 : 1;
}
