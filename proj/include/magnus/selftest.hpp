#ifndef MAGNUS_SELFTEST_HPP
#define MAGNUS_SELFTEST_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace magnus {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; exceeding it fails the criterion
  std::string detail;
};

struct SelftestOptions {
  std::vector<int> only;  // empty = all twelve
  std::uint64_t seed = 20240611;
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> run_selftest(const SelftestOptions& opts = {});
int selftest_criterion_count();

}  // namespace magnus

#endif  // MAGNUS_SELFTEST_HPP
