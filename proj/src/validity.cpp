#include "procmat/validity.hpp"

#include <algorithm>
#include <stdexcept>

namespace procmat {

bool ValidityReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check& ValidityReport::at(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw std::out_of_range("no check named '" + std::string(name) + "'");
}

std::vector<std::string> ValidityReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

}  // namespace procmat
