#include "pshift/dynamics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "pshift/errors.hpp"

namespace pshift {

Orbit orbit(std::span<const PseudoShift> shifts, const SupportedVector& x, std::int64_t n_max,
            const OrbitMode& mode, const OrbitLimits& limits) {
  if (n_max < 0) throw ParameterError("n_max must be >= 0");
  if (shifts.empty()) throw ParameterError("need at least one operator");
  const auto* stats = std::get_if<StatsMode>(&mode);
  if (stats && (!(stats->p >= 1.0) || !std::isfinite(stats->p))) {
    throw ParameterError("p must be in [1, inf)");
  }

  Orbit out{mode, {}};
  out.records.reserve(static_cast<std::size_t>(n_max) + 1);
  std::vector<SupportedVector> current(shifts.size(), x);
  std::size_t stored = 0;

  for (std::int64_t n = 0; n <= n_max; ++n) {
    if (n > 0) {
      for (std::size_t i = 0; i < shifts.size(); ++i) current[i] = shifts[i].apply(current[i]);
    }
    OrbitRecord rec;
    rec.n = n;
    if (stats) {
      for (const auto& v : current) {
        rec.norms.push_back(v.norm(stats->p));
        rec.distances.push_back(distance(v, stats->target, stats->p));
      }
    } else {
      for (const auto& v : current) stored += v.size();
      if (stored > limits.max_total_support) {
        throw OrbitMemoryError("full-mode orbit exceeds " +
                               std::to_string(limits.max_total_support) + " stored coefficients");
      }
      rec.snapshots = current;
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

std::vector<std::int64_t> return_set(const Orbit& orbit, const SupportedVector& target,
                                     double delta, double p) {
  const auto* stats = std::get_if<StatsMode>(&orbit.mode);
  if (stats && (stats->p != p || !(stats->target == target))) {
    throw ModeMismatchError("stats-mode orbit carries distances to a different target or norm");
  }
  std::vector<std::int64_t> out;
  for (const auto& rec : orbit.records) {
    bool inside = true;
    if (stats) {
      for (double d : rec.distances) inside = inside && d < delta;
    } else {
      for (const auto& v : rec.snapshots) inside = inside && distance(v, target, p) < delta;
    }
    if (inside) out.push_back(rec.n);
  }
  return out;
}

DensityEstimate upper_banach_density(std::span<const std::int64_t> set, std::int64_t window,
                                     std::int64_t m_max) {
  if (window < 1) throw ParameterError("window length N must be >= 1");
  if (m_max < 0) throw ParameterError("m_max must be >= 0");
  std::vector<std::int64_t> a(set.begin(), set.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  if (!a.empty() && a.front() < 0) throw ParameterError("density sets must be subsets of N");

  DensityEstimate est;
  est.window = window;
  est.m_max = m_max;
  est.set_size = a.size();
  // Sliding window [m+1, m+N]: lo = first element > m, hi = first element > m+N.
  auto lo = a.begin();
  auto hi = a.begin();
  for (std::int64_t m = 0; m <= m_max; ++m) {
    while (lo != a.end() && *lo <= m) ++lo;
    while (hi != a.end() && *hi <= m + window) ++hi;
    est.best_count = std::max<std::int64_t>(est.best_count, hi - lo);
  }
  est.value = static_cast<double>(est.best_count) / static_cast<double>(window);
  return est;
}

std::string orbit_csv(const Orbit& orbit) {
  if (!std::holds_alternative<StatsMode>(orbit.mode)) {
    throw ModeMismatchError("CSV export needs a stats-mode orbit");
  }
  std::ostringstream out;
  const std::size_t ops = orbit.records.empty() ? 0 : orbit.records.front().norms.size();
  out << "n";
  for (std::size_t i = 1; i <= ops; ++i) out << ",norm_" << i << ",dist_" << i;
  out << '\n';
  char buf[64];
  for (const auto& rec : orbit.records) {
    out << rec.n;
    for (std::size_t i = 0; i < ops; ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", rec.norms[i]);
      out << buf;
      std::snprintf(buf, sizeof buf, ",%.17g", rec.distances[i]);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pshift
