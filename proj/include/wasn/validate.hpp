#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace wasn {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant checks on a small random instance (K=5, M_q=2, Q=1).
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

}  // namespace wasn
