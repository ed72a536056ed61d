#pragma once

#include <map>
#include <memory>
#include <variant>
#include <vector>

#include "pshift/inducing_map.hpp"
#include "pshift/ext_real.hpp"
#include "pshift/supported_vector.hpp"

namespace pshift {

/// Bounded nonzero bilateral weight sequence (w_n), n in Z.
///
/// Kinds:
///  - two_level(lambda, cutoff): w_n = lambda for n > cutoff, 1/lambda otherwise
///  - table(entries, fallback):  explicit finite table, `fallback` elsewhere
///  - periodic(values):          w_n = values[n mod P]
///  - decaying(scale, exponent): w_n = scale / (1 + |n|)^exponent; inf |w| = 0 when exponent > 0
///  - reciprocal_pullback(inner, f): w_n = 1 / inner_{f(n)}; the weights of an inverse pseudo-shift
///
/// sup |w| and inf |w| are computed once from the closed form.
class WeightRule {
 public:
  struct TwoLevel {
    double lambda;
    Index cutoff;
  };
  struct Table {
    std::map<Index, double> entries;
    double fallback;
  };
  struct Periodic {
    std::vector<double> values;
  };
  struct Decaying {
    double scale;
    double exponent;
  };
  struct ReciprocalPullback {
    std::shared_ptr<const WeightRule> inner;
    InducingMap map;
  };
  using Kind = std::variant<TwoLevel, Table, Periodic, Decaying, ReciprocalPullback>;

  static WeightRule two_level(double lambda, Index cutoff);
  static WeightRule constant(double c);
  static WeightRule table(std::map<Index, double> entries, double fallback);
  static WeightRule periodic(std::vector<double> values);
  static WeightRule decaying(double scale, double exponent);
  static WeightRule reciprocal_pullback(const WeightRule& inner, InducingMap map);

  double operator()(Index n) const { return at(n); }
  double at(Index n) const;
  /// prod_{v=0..count-1} w_{start + v*step}; closed form for two_level, table and periodic.
  ExtReal product(Index start, Index step, std::int64_t count) const;

  double sup_abs() const { return sup_abs_; }
  double inf_abs() const { return inf_abs_; }

  const Kind& kind() const { return kind_; }

 private:
  explicit WeightRule(Kind kind);

  Kind kind_;
  double sup_abs_ = 0.0;
  double inf_abs_ = 0.0;
};

}  // namespace pshift
