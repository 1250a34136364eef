#pragma once

#include <string>
#include <vector>

namespace qmc {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  double budget = 0.0;  // wall-clock limit in seconds; exceeding it fails the criterion
};

inline constexpr int kSelftestCriteria = 11;

// Acceptance checks 1..11 (library level). Check 12 needs the CLI and lives there.
CriterionResult run_criterion(int id, unsigned threads = 1);
std::vector<CriterionResult> run_selftest(unsigned threads = 1);

// "PASS  3 negative-shifted input ... (1.20 s / 60 s) detail"
std::string format_result(const CriterionResult& r);

}  // namespace qmc
