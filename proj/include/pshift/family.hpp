#pragma once

#include <span>
#include <vector>

#include "pshift/pseudo_shift.hpp"

namespace pshift {

/// Translations f_i(n) = n + p_i with two-level weights
///   w^(i)_n = lambda_i for n > l_i,  1/lambda_i for n <= l_i,
/// subject to 2 p_s < p_t and 1 < |lambda_s| < |lambda_t| for every s < t.
struct FamilyParams {
  std::vector<Index> steps;
  std::vector<double> lambdas;
  std::vector<Index> cutoffs;
  double p = 2.0;

  std::size_t size() const { return steps.size(); }
  /// Throws ParameterError naming the first violated inequality.
  void validate() const;

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

struct FamilyConstants {
  double gamma;  // max |lambda_s| / |lambda_{s+1}|, < 1
  double alpha;  // min |lambda_s|, > 1
  double beta;   // max |lambda_s|
  Index L;       // max |l_s|
};

FamilyConstants derived_constants(const FamilyParams& params);

std::vector<PseudoShift> make_family(const FamilyParams& params);

/// T_i^-1 = T_{g_i, v^(i)} with g_i(n) = n - p_i and v^(i)_n = 1 / w^(i)_{n + p_i}.
std::vector<PseudoShift> inverse_family(std::span<const PseudoShift> shifts);

/// Parameters whose family is the inverse family conjugated by the flip e_n -> e_{-n}:
/// same steps and lambdas, cutoffs l_i' = p_i - l_i - 1. The flip preserves [M], so
/// thresholds computed from these parameters apply to the inverse family directly.
FamilyParams inverse_family_params(const FamilyParams& params);

enum class ThresholdCase { EllGreaterThanI, IGreaterThanEll };

/// The real number k has to exceed:
///   ell > i:  (ln eps - ln beta^{2(M+L)/p_1}) / ln gamma
///   i > ell:  (-ln eps + ln beta^{(4M+4L)/p_1}) / ln alpha
double threshold_expression(const FamilyParams& params, double epsilon, Index M,
                            ThresholdCase which);

/// Least integer strictly above `threshold_expression`, at least 1.
std::int64_t threshold_k(const FamilyParams& params, double epsilon, Index M, ThresholdCase which);

/// Pair case for the ordered pair (i, ell), i != ell.
inline ThresholdCase threshold_case(std::size_t i, std::size_t ell) {
  return ell > i ? ThresholdCase::EllGreaterThanI : ThresholdCase::IGreaterThanEll;
}

}  // namespace pshift
