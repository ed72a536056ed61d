#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pshift/supported_vector.hpp"

namespace pshift {

/// Bijection f of Z inducing a pseudo-shift.
///
/// Two kinds exist: translation f(n) = n + r (r != 0), and a general map given
/// by a forward and an inverse rule. General maps cannot be checked globally,
/// so every single step of an evaluation verifies f^-1(f(n)) = n (or the
/// reverse) and throws InconsistentMapError on the first disagreement.
class InducingMap {
 public:
  using Rule = std::function<Index(Index)>;

  static InducingMap translation(Index step);
  /// `name` is what gets serialised; only names known to `named()` round-trip.
  static InducingMap general(std::string name, Rule forward, Rule inverse);
  /// Built-in general rules by name. A trailing ":inverse" swaps the rules.
  static InducingMap named(const std::string& name);
  static std::vector<std::string> builtin_names();

  bool is_translation() const { return std::holds_alternative<Translation>(kind_); }
  /// Translation step, empty for general maps.
  std::optional<Index> step() const;
  /// Serialisable name of a general map ("translation" otherwise).
  std::string rule_name() const;

  /// f^k(n); k may be negative, f^0(n) = n.
  Index evaluate(Index n, std::int64_t k) const;
  Index forward(Index n) const;
  Index backward(Index n) const;

  InducingMap inverse() const;

 private:
  struct Translation {
    Index step;
  };
  struct General {
    std::string name;
    Rule forward;
    Rule inverse;
  };

  explicit InducingMap(std::variant<Translation, General> kind) : kind_(std::move(kind)) {}

  std::variant<Translation, General> kind_;
};

}  // namespace pshift
