#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace procmat {

/// One named condition with the measured residual behind its verdict.
struct Check {
  std::string name;
  std::string description;
  double residual = 0.0;  // most-negative eigenvalue, or max-abs deviation
  bool passed = false;
};

struct ValidityReport {
  std::vector<Check> checks;

  bool all_passed() const;
  /// Throws std::out_of_range for an unknown check name.
  const Check& at(std::string_view name) const;
  /// Names of the failing checks, in report order.
  std::vector<std::string> failures() const;
};

}  // namespace procmat
