#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace alignfluct {

struct SelfTestOptions {
  /// Test hook: "blastz" corrupts the BLASTZ constant fed to the T_BLASTZ check.
  std::string inject_fault;
  unsigned workers = 1;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::size_t checks = 0;
  std::string detail;
  double seconds = 0.0;
};

struct SelfTestReport {
  std::vector<PropertyResult> results;
  bool all_passed() const;
  const PropertyResult* first_failure() const;
};

/// Oracle-equivalence and invariant checks on small instances. Each property
/// runs to completion even after an earlier one fails.
SelfTestReport run_selftest(const SelfTestOptions& opts = {});

}  // namespace alignfluct
