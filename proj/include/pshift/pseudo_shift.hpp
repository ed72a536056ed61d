#pragma once

#include <string>

#include "pshift/inducing_map.hpp"
#include "pshift/ext_real.hpp"
#include "pshift/supported_vector.hpp"
#include "pshift/weight_rule.hpp"

namespace pshift {

/// Bilateral weighted pseudo-shift T_{f,w} on l^p(Z):
///
///   T (sum_j x_j e_j) = sum_j w_{f(j)} x_{f(j)} e_j,   i.e.  T e_k = w_k e_{f^-1(k)}.
///
/// Immutable; all operations are pure.
class PseudoShift {
 public:
  PseudoShift(std::string name, InducingMap map, WeightRule weights)
      : name_(std::move(name)), map_(std::move(map)), weights_(std::move(weights)) {}

  const std::string& name() const { return name_; }
  const InducingMap& map() const { return map_; }
  const WeightRule& weights() const { return weights_; }

  /// inf |w| > 0 (boundedness is guaranteed by the weight rule).
  bool invertible() const { return weights_.inf_abs() > 0.0; }
  /// Crude operator norm bound sup |w|.
  double norm_bound() const { return weights_.sup_abs(); }

  SupportedVector apply(const SupportedVector& x) const;
  /// T^-1 e_j = (1 / w_{f(j)}) e_{f(j)}. Throws NotInvertibleError.
  SupportedVector apply_inverse(const SupportedVector& x) const;
  /// T^n x via the closed form T^n e_m = c_{m,n} e_{f^-n(m)}. Negative n needs an
  /// invertible operator.
  SupportedVector apply_power(const SupportedVector& x, std::int64_t n) const;

  /// W_{m,n} = prod_{v=1..n} w_{f^v(m)}, n >= 1. T^n e_{f^n(m)} = W_{m,n} e_m.
  /// O(1) in n for translation maps with two-level, table or periodic weights.
  ExtReal forward_product(Index m, std::int64_t n) const;
  /// prod_{v=0..n-1} w_{f^-v(m)}, n >= 1: the scalar c with T^n e_m = c e_{f^-n(m)}.
  ExtReal backward_coefficient(Index m, std::int64_t n) const;

  /// The inverse as a pseudo-shift T_{f^-1, v} with v_n = 1 / w_{f(n)}. Translation maps
  /// with two-level, table or periodic weights keep their closed form.
  PseudoShift inverse() const;

 private:
  void require_invertible(const char* what) const;

  std::string name_;
  InducingMap map_;
  WeightRule weights_;
};

}  // namespace pshift
