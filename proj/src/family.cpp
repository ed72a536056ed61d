#include "pshift/family.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pshift/errors.hpp"

namespace pshift {

void FamilyParams::validate() const {
  const std::size_t N = steps.size();
  if (N < 2) throw ParameterError("family needs N >= 2 operators");
  if (lambdas.size() != N || cutoffs.size() != N) {
    throw ParameterError("steps, lambdas and cutoffs must have the same length");
  }
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("p must be in [1, inf)");
  for (std::size_t s = 0; s < N; ++s) {
    if (steps[s] <= 0) {
      throw ParameterError("steps must be positive integers: p_" + std::to_string(s + 1) + " = " +
                           std::to_string(steps[s]));
    }
    if (!std::isfinite(lambdas[s]) || !(std::fabs(lambdas[s]) > 1.0)) {
      throw ParameterError("1 < |lambda_s| violated at s=" + std::to_string(s + 1));
    }
  }
  for (std::size_t s = 0; s < N; ++s) {
    for (std::size_t t = s + 1; t < N; ++t) {
      if (!(2 * steps[s] < steps[t])) {
        throw ParameterError("2p_s < p_t violated at s=" + std::to_string(s + 1) +
                             ", t=" + std::to_string(t + 1) + ": 2*" + std::to_string(steps[s]) +
                             " >= " + std::to_string(steps[t]));
      }
      if (!(std::fabs(lambdas[s]) < std::fabs(lambdas[t]))) {
        throw ParameterError("|lambda_s| < |lambda_t| violated at s=" + std::to_string(s + 1) +
                             ", t=" + std::to_string(t + 1));
      }
    }
  }
}

FamilyConstants derived_constants(const FamilyParams& params) {
  params.validate();
  FamilyConstants c{0.0, std::fabs(params.lambdas.front()), 0.0, 0};
  for (std::size_t s = 0; s < params.size(); ++s) {
    double a = std::fabs(params.lambdas[s]);
    c.alpha = std::min(c.alpha, a);
    c.beta = std::max(c.beta, a);
    c.L = std::max(c.L, std::abs(params.cutoffs[s]));
    if (s + 1 < params.size()) c.gamma = std::max(c.gamma, a / std::fabs(params.lambdas[s + 1]));
  }
  return c;
}

std::vector<PseudoShift> make_family(const FamilyParams& params) {
  params.validate();
  std::vector<PseudoShift> out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out.emplace_back("T" + std::to_string(i + 1), InducingMap::translation(params.steps[i]),
                     WeightRule::two_level(params.lambdas[i], params.cutoffs[i]));
  }
  return out;
}

std::vector<PseudoShift> inverse_family(std::span<const PseudoShift> shifts) {
  std::vector<PseudoShift> out;
  out.reserve(shifts.size());
  for (const auto& t : shifts) out.push_back(t.inverse());
  return out;
}

FamilyParams inverse_family_params(const FamilyParams& params) {
  params.validate();
  FamilyParams out = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    out.cutoffs[i] = params.steps[i] - params.cutoffs[i] - 1;
  }
  return out;
}

double threshold_expression(const FamilyParams& params, double epsilon, Index M,
                            ThresholdCase which) {
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be > 0");
  if (M < 0) throw ParameterError("M must be >= 0");
  const auto c = derived_constants(params);
  const double p1 = static_cast<double>(params.steps.front());
  const double mL = static_cast<double>(M + c.L);
  if (which == ThresholdCase::EllGreaterThanI) {
    return (std::log(epsilon) - 2.0 * mL / p1 * std::log(c.beta)) / std::log(c.gamma);
  }
  return (-std::log(epsilon) + 4.0 * mL / p1 * std::log(c.beta)) / std::log(c.alpha);
}

std::int64_t threshold_k(const FamilyParams& params, double epsilon, Index M,
                         ThresholdCase which) {
  double expr = threshold_expression(params, epsilon, M, which);
  auto k = static_cast<std::int64_t>(std::floor(expr)) + 1;
  return std::max<std::int64_t>(k, 1);
}

}  // namespace pshift
