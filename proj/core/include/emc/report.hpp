#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace emc {

// One violated invariant: where it was found and what is wrong.
struct Violation {
  std::string where;
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  void add(std::string where, std::string what) {
    violations.push_back({std::move(where), std::move(what)});
  }

  std::string to_string() const {
    if (ok()) return "pass";
    std::string out;
    for (const auto& v : violations) {
      if (!out.empty()) out += '\n';
      out += v.where;
      out += ": ";
      out += v.what;
    }
    return out;
  }
};

// Malformed input: unparsable rationals, bad JSON shapes, unknown labels.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An enumeration would exceed the caller-supplied cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace emc
