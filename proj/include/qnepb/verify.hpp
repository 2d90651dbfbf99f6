#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qnepb {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double value = 0.0;     // measured quantity (worst case over trials)
  double tolerance = 0.0;
};

/// Property suites: "operators", "pb", "energy" or "all". Unknown names throw InputError.
std::vector<CheckResult> run_suite(const std::string& suite, int trials = 20);

/// One JSON object per check; returns true when every check passed.
bool report(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace qnepb
