#include "pshift/weight_rule.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pshift/errors.hpp"

namespace pshift {

namespace {

void require_weight(double w, const char* what) {
  if (w == 0.0 || !std::isfinite(w)) {
    throw ParameterError(std::string(what) + ": weights must be finite and nonzero");
  }
}

Index floor_mod(Index n, Index m) {
  Index r = n % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

WeightRule WeightRule::two_level(double lambda, Index cutoff) {
  require_weight(lambda, "two_level");
  return WeightRule(TwoLevel{lambda, cutoff});
}

WeightRule WeightRule::constant(double c) { return table({}, c); }

WeightRule WeightRule::table(std::map<Index, double> entries, double fallback) {
  require_weight(fallback, "table fallback");
  for (const auto& [n, w] : entries) require_weight(w, "table entry");
  return WeightRule(Table{std::move(entries), fallback});
}

WeightRule WeightRule::periodic(std::vector<double> values) {
  if (values.empty()) throw ParameterError("periodic: period list must be nonempty");
  for (double w : values) require_weight(w, "periodic");
  return WeightRule(Periodic{std::move(values)});
}

WeightRule WeightRule::decaying(double scale, double exponent) {
  require_weight(scale, "decaying scale");
  if (!(exponent >= 0.0) || !std::isfinite(exponent)) {
    throw ParameterError("decaying: exponent must be finite and >= 0");
  }
  return WeightRule(Decaying{scale, exponent});
}

WeightRule WeightRule::reciprocal_pullback(const WeightRule& inner, InducingMap map) {
  if (inner.inf_abs() == 0.0) {
    throw NotInvertibleError("reciprocal weights of a rule with inf |w| = 0 are unbounded");
  }
  return WeightRule(ReciprocalPullback{std::make_shared<const WeightRule>(inner), std::move(map)});
}

WeightRule::WeightRule(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      [this](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, TwoLevel>) {
          double a = std::fabs(k.lambda);
          sup_abs_ = std::max(a, 1.0 / a);
          inf_abs_ = std::min(a, 1.0 / a);
        } else if constexpr (std::is_same_v<K, Table>) {
          sup_abs_ = inf_abs_ = std::fabs(k.fallback);
          for (const auto& [n, w] : k.entries) {
            sup_abs_ = std::max(sup_abs_, std::fabs(w));
            inf_abs_ = std::min(inf_abs_, std::fabs(w));
          }
        } else if constexpr (std::is_same_v<K, Periodic>) {
          sup_abs_ = 0.0;
          inf_abs_ = std::fabs(k.values.front());
          for (double w : k.values) {
            sup_abs_ = std::max(sup_abs_, std::fabs(w));
            inf_abs_ = std::min(inf_abs_, std::fabs(w));
          }
        } else if constexpr (std::is_same_v<K, Decaying>) {
          sup_abs_ = std::fabs(k.scale);
          inf_abs_ = k.exponent > 0.0 ? 0.0 : std::fabs(k.scale);
        } else {
          sup_abs_ = 1.0 / k.inner->inf_abs();
          inf_abs_ = 1.0 / k.inner->sup_abs();
        }
      },
      kind_);
}

double WeightRule::at(Index n) const {
  return std::visit(
      [n](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, TwoLevel>) {
          return n > k.cutoff ? k.lambda : 1.0 / k.lambda;
        } else if constexpr (std::is_same_v<K, Table>) {
          auto it = k.entries.find(n);
          return it == k.entries.end() ? k.fallback : it->second;
        } else if constexpr (std::is_same_v<K, Periodic>) {
          return k.values[floor_mod(n, static_cast<Index>(k.values.size()))];
        } else if constexpr (std::is_same_v<K, Decaying>) {
          return k.scale / std::pow(1.0 + std::fabs(static_cast<double>(n)), k.exponent);
        } else {
          return 1.0 / k.inner->at(k.map.forward(n));
        }
      },
      kind_);
}

ExtReal WeightRule::product(Index start, Index step, std::int64_t count) const {
  if (count <= 0) return ExtReal::one();
  if (step == 0) return pow(ExtReal(at(start)), count);
  if (const auto* t = std::get_if<TwoLevel>(&kind_)) {
    // start + v*step > cutoff for `above` of the v in [0, count).
    std::int64_t above = 0;
    if (step > 0) {
      std::int64_t first = floor_div(t->cutoff - start, step) + 1;
      above = count - std::clamp<std::int64_t>(first, 0, count);
    } else {
      above = std::clamp<std::int64_t>(ceil_div(start - t->cutoff, -step), 0, count);
    }
    return pow(ExtReal(t->lambda), above - (count - above));
  }
  if (const auto* t = std::get_if<Table>(&kind_)) {
    ExtReal out = pow(ExtReal(t->fallback), count);
    for (const auto& [n, w] : t->entries) {
      const Index offset = n - start;
      if (offset % step != 0) continue;
      const std::int64_t v = offset / step;
      if (v >= 0 && v < count) out *= ExtReal(w) / ExtReal(t->fallback);
    }
    return out;
  }
  if (const auto* t = std::get_if<Periodic>(&kind_)) {
    const auto P = static_cast<Index>(t->values.size());
    const std::int64_t cycle = P / std::gcd(P, floor_mod(step, P) == 0 ? P : floor_mod(step, P));
    ExtReal out = ExtReal::one();
    for (std::int64_t v = 0; v < std::min(cycle, count); ++v) {
      const std::int64_t hits = (count - v + cycle - 1) / cycle;
      out *= pow(ExtReal(t->values[floor_mod(start + v * step, P)]), hits);
    }
    return out;
  }
  ExtReal out = ExtReal::one();
  for (std::int64_t v = 0; v < count; ++v) out *= ExtReal(at(start + v * step));
  return out;
}

}  // namespace pshift
