#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pshift/criterion.hpp"
#include "pshift/pseudo_shift.hpp"
#include "pshift/report.hpp"

namespace pshift {

/// Deterministic dense family of targets.
///
/// Vectors are full on [-r, r] (no zero coefficient) with entries in
/// grid * {±1, ±2, ...}. They are emitted in levels h = 1, 2, ...: level h holds
/// every vector with r <= min(h - 1, M_max) and max |coefficient| <= h*grid not
/// emitted before, sorted by (r, max |coefficient|) and then lexicographically
/// with coefficient order 1, -1, 2, -2, ...
std::vector<SupportedVector> enumerate_targets(Index M_max, double grid, std::size_t count);

struct ScheduleStep {
  std::size_t k = 0;  // 1-based
  SupportedVector target;
  std::int64_t n = 0;
  double epsilon = 0.0;  // 2^-k * epsilon0
  SupportedVector z;
  std::vector<double> residuals;  // ||T_i^n x_k - target||_p right after the step
};

struct ScheduleCertificate {
  std::vector<PseudoShift> operators;
  double p = 2.0;
  double epsilon0 = 0.0;
  std::vector<ScheduleStep> steps;
  SupportedVector x;
};

struct ScheduleFailure {
  std::size_t step = 0;  // 1-based step that found no witness
  NoWitness diagnosis;
  ScheduleCertificate partial;
};

using BuildResult = std::variant<ScheduleCertificate, ScheduleFailure>;

/// Greedy assembly x = sum_k z_k visiting each target with all operators at once.
///
/// Step k searches n in (n_{k-1}, n_{k-1} + n_max_per_step] for a witness at
/// eps_k / 2 with the partial sum as collapse vector and ||z_k|| below
/// eps_k / max(1, S^{n_{k-1}}), S = max_i sup |w^(i)|. This keeps every earlier visit
/// within 2 eps_j once all later corrections are added.
BuildResult build_dhc_vector(std::span<const PseudoShift> shifts,
                             std::span<const SupportedVector> targets, double epsilon0, double p,
                             std::int64_t n_max_per_step);

/// log of the z-norm budget of step k given the earlier times.
double log_z_budget(std::span<const PseudoShift> shifts, double epsilon_k,
                    std::span<const std::int64_t> earlier_times);

VerificationReport verify_schedule(std::span<const PseudoShift> shifts,
                                   const ScheduleCertificate& cert);

}  // namespace pshift
