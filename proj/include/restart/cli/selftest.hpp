#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace restart::cli {

struct SelftestOptions {
  // Perturbs one internal sum-tree node before the consistency check.
  bool corrupt_sum_tree = false;
  unsigned long long seed = 12345;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CheckResult> run_selftest(const SelftestOptions& opts);

// Prints one line per check; returns 0 when all pass, 1 otherwise.
int selftest_command(const SelftestOptions& opts, std::ostream& out);

}  // namespace restart::cli
