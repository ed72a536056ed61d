#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pshift/pseudo_shift.hpp"

namespace pshift {

struct FullMode {};
struct StatsMode {
  SupportedVector target;
  double p = 2.0;
};
using OrbitMode = std::variant<FullMode, StatsMode>;

/// Joint orbit state at time n. Full mode fills `snapshots` (T_i^n x per operator);
/// stats mode fills `norms` and `distances` (to the stats target) instead.
struct OrbitRecord {
  std::int64_t n = 0;
  std::vector<SupportedVector> snapshots;
  std::vector<double> norms;
  std::vector<double> distances;
};

struct Orbit {
  OrbitMode mode;
  std::vector<OrbitRecord> records;
};

struct OrbitLimits {
  /// Upper limit on the total number of stored coefficients in full mode.
  std::size_t max_total_support = 5'000'000;
};

/// Records for n = 0..n_max, generated by repeated application of each operator.
Orbit orbit(std::span<const PseudoShift> shifts, const SupportedVector& x, std::int64_t n_max,
            const OrbitMode& mode, const OrbitLimits& limits = {});

/// {n : ||T_i^n x - target||_p < delta for every i}, ascending.
std::vector<std::int64_t> return_set(const Orbit& orbit, const SupportedVector& target,
                                     double delta, double p);

/// Finite surrogate of the upper Banach density: max over 0 <= m <= m_max of
/// #(A ∩ [m+1, m+N]) / N. Carries N and m_max so the value is reproducible.
struct DensityEstimate {
  std::int64_t window = 1;
  std::int64_t m_max = 0;
  double value = 0.0;
  std::size_t set_size = 0;
  std::int64_t best_count = 0;
};

DensityEstimate upper_banach_density(std::span<const std::int64_t> set, std::int64_t window,
                                     std::int64_t m_max);

/// n, then norm_i and dist_i for every operator. Stats mode only.
std::string orbit_csv(const Orbit& orbit);

}  // namespace pshift
