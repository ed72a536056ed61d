#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace pshift {

/// One recomputed claim of a certificate.
struct Check {
  std::string name;
  double claimed = 0.0;
  double recomputed = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<Check> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
  std::size_t failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
  }
  bool failed(const std::string& name) const {
    return std::any_of(checks.begin(), checks.end(),
                       [&](const Check& c) { return c.name == name && !c.pass; });
  }

  void add(std::string name, double claimed, double recomputed, bool pass) {
    checks.push_back({std::move(name), claimed, recomputed, pass});
  }
};

/// |a - b| <= rel * max(|a|, |b|); equal infinities compare equal.
inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-300) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::fabs(a - b) <= std::max(abs_floor, rel * std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace pshift
