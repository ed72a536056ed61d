#include "pshift/pseudo_shift.hpp"

#include <stdexcept>

#include "pshift/errors.hpp"

namespace pshift {

namespace {

Index floor_mod(Index n, Index m) {
  Index r = n % m;
  return r < 0 ? r + m : r;
}

}  // namespace

void PseudoShift::require_invertible(const char* what) const {
  if (!invertible()) {
    throw NotInvertibleError(std::string(what) + ": pseudo-shift '" + name_ +
                             "' is not invertible (inf |w| = 0)");
  }
}

SupportedVector PseudoShift::apply(const SupportedVector& x) const {
  SupportedVector out;
  for (const auto& [k, c] : x) out.add(map_.backward(k), ExtReal(weights_.at(k)) * c);
  return out;
}

SupportedVector PseudoShift::apply_inverse(const SupportedVector& x) const {
  require_invertible("apply_inverse");
  SupportedVector out;
  for (const auto& [j, c] : x) {
    Index fj = map_.forward(j);
    out.add(fj, c / ExtReal(weights_.at(fj)));
  }
  return out;
}

SupportedVector PseudoShift::apply_power(const SupportedVector& x, std::int64_t n) const {
  if (n == 0) return x;
  SupportedVector out;
  if (n > 0) {
    for (const auto& [m, c] : x) out.add(map_.evaluate(m, -n), c * backward_coefficient(m, n));
    return out;
  }
  require_invertible("apply_power with negative exponent");
  // T^-k e_j = (1 / W_{j,k}) e_{f^k(j)}
  for (const auto& [j, c] : x) out.add(map_.evaluate(j, -n), c / forward_product(j, -n));
  return out;
}

ExtReal PseudoShift::forward_product(Index m, std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("forward_product needs n >= 1");
  if (auto r = map_.step()) return weights_.product(m + *r, *r, n);
  ExtReal product = ExtReal::one();
  Index idx = m;
  for (std::int64_t v = 1; v <= n; ++v) {
    idx = map_.forward(idx);
    product *= ExtReal(weights_.at(idx));
  }
  return product;
}

ExtReal PseudoShift::backward_coefficient(Index m, std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("backward_coefficient needs n >= 1");
  if (auto r = map_.step()) return weights_.product(m, -*r, n);
  ExtReal product = ExtReal::one();
  Index idx = m;
  for (std::int64_t v = 0; v < n; ++v) {
    product *= ExtReal(weights_.at(idx));
    idx = map_.backward(idx);
  }
  return product;
}

PseudoShift PseudoShift::inverse() const {
  require_invertible("inverse");
  const std::string inv_name =
      name_.ends_with("^-1") ? name_.substr(0, name_.size() - 3) : name_ + "^-1";
  if (auto step = map_.step()) {
    const Index r = *step;
    auto inv_map = InducingMap::translation(-r);
    // v_n = 1 / w_{n + r}
    if (const auto* t = std::get_if<WeightRule::TwoLevel>(&weights_.kind())) {
      return {inv_name, inv_map, WeightRule::two_level(1.0 / t->lambda, t->cutoff - r)};
    }
    if (const auto* t = std::get_if<WeightRule::Table>(&weights_.kind())) {
      std::map<Index, double> entries;
      for (const auto& [n, w] : t->entries) entries.emplace(n - r, 1.0 / w);
      return {inv_name, inv_map, WeightRule::table(std::move(entries), 1.0 / t->fallback)};
    }
    if (const auto* t = std::get_if<WeightRule::Periodic>(&weights_.kind())) {
      const auto period = static_cast<Index>(t->values.size());
      std::vector<double> values(t->values.size());
      for (Index n = 0; n < period; ++n) values[n] = 1.0 / t->values[floor_mod(n + r, period)];
      return {inv_name, inv_map, WeightRule::periodic(std::move(values))};
    }
  }
  return {inv_name, map_.inverse(), WeightRule::reciprocal_pullback(weights_, map_)};
}

}  // namespace pshift
