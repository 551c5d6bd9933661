#pragma once

#include <string>
#include <vector>

namespace greencell {

// Collects human-readable constraint violations instead of failing on the
// first one, so callers can surface every problem with a parameter set at
// once.
struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }

  void require(bool condition, const std::string& message) {
    if (!condition) {
      violations.push_back(message);
    }
  }

  void merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
  }

  std::string to_string() const {
    std::string joined;
    for (const auto& v : violations) {
      if (!joined.empty()) {
        joined += "; ";
      }
      joined += v;
    }
    return joined;
  }
};

}  // namespace greencell
