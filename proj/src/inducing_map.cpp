#include "pshift/inducing_map.hpp"

#include <map>

#include "pshift/errors.hpp"

namespace pshift {

namespace {

constexpr const char* kInverseSuffix = ":inverse";

Index floor_mod(Index n, Index m) {
  Index r = n % m;
  return r < 0 ? r + m : r;
}

struct BuiltinRule {
  InducingMap::Rule forward;
  InducingMap::Rule inverse;
};

// Even indices move up by two, odd indices move down by two.
const std::map<std::string, BuiltinRule>& builtin_rules() {
  static const std::map<std::string, BuiltinRule> rules{
      {"parity_shift",
       {[](Index n) { return floor_mod(n, 2) == 0 ? n + 2 : n - 2; },
        [](Index n) { return floor_mod(n, 2) == 0 ? n - 2 : n + 2; }}},
      // Translation by one written as a general rule, for cross-checking the
      // general code path against the translation one.
      {"unit_shift", {[](Index n) { return n + 1; }, [](Index n) { return n - 1; }}},
      // Swaps 3k+1 and 3k+2 and moves the pair one block up; multiples of 3 step by 3.
      {"block_twist",
       {[](Index n) {
          switch (floor_mod(n, 3)) {
            case 1: return n + 4;
            case 2: return n + 2;
            default: return n + 3;
          }
        },
        [](Index n) {
          switch (floor_mod(n, 3)) {
            case 1: return n - 2;
            case 2: return n - 4;
            default: return n - 3;
          }
        }}},
  };
  return rules;
}

}  // namespace

InducingMap InducingMap::translation(Index step) {
  if (step == 0) throw ParameterError("translation step must be nonzero");
  return InducingMap(Translation{step});
}

InducingMap InducingMap::general(std::string name, Rule forward, Rule inverse) {
  if (!forward || !inverse) throw ParameterError("general inducing map needs both rules");
  return InducingMap(General{std::move(name), std::move(forward), std::move(inverse)});
}

InducingMap InducingMap::named(const std::string& name) {
  std::string base = name;
  bool inverted = false;
  const std::string suffix = kInverseSuffix;
  if (base.size() > suffix.size() && base.ends_with(suffix)) {
    base.resize(base.size() - suffix.size());
    inverted = true;
  }
  const auto& rules = builtin_rules();
  auto it = rules.find(base);
  if (it == rules.end()) throw ParameterError("unknown inducing map rule '" + name + "'");
  auto map = general(base, it->second.forward, it->second.inverse);
  return inverted ? map.inverse() : map;
}

std::vector<std::string> InducingMap::builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, rule] : builtin_rules()) names.push_back(name);
  return names;
}

std::optional<Index> InducingMap::step() const {
  if (const auto* t = std::get_if<Translation>(&kind_)) return t->step;
  return std::nullopt;
}

std::string InducingMap::rule_name() const {
  if (const auto* g = std::get_if<General>(&kind_)) return g->name;
  return "translation";
}

Index InducingMap::forward(Index n) const {
  if (const auto* t = std::get_if<Translation>(&kind_)) return n + t->step;
  const auto& g = std::get<General>(kind_);
  Index y = g.forward(n);
  if (g.inverse(y) != n) {
    throw InconsistentMapError("map '" + g.name + "': inverse(forward(" + std::to_string(n) +
                               ")) != " + std::to_string(n));
  }
  return y;
}

Index InducingMap::backward(Index n) const {
  if (const auto* t = std::get_if<Translation>(&kind_)) return n - t->step;
  const auto& g = std::get<General>(kind_);
  Index y = g.inverse(n);
  if (g.forward(y) != n) {
    throw InconsistentMapError("map '" + g.name + "': forward(inverse(" + std::to_string(n) +
                               ")) != " + std::to_string(n));
  }
  return y;
}

Index InducingMap::evaluate(Index n, std::int64_t k) const {
  if (const auto* t = std::get_if<Translation>(&kind_)) return n + k * t->step;
  for (std::int64_t i = 0; i < k; ++i) n = forward(n);
  for (std::int64_t i = 0; i > k; --i) n = backward(n);
  return n;
}

InducingMap InducingMap::inverse() const {
  if (const auto* t = std::get_if<Translation>(&kind_)) return translation(-t->step);
  const auto& g = std::get<General>(kind_);
  const std::string suffix = kInverseSuffix;
  std::string name = g.name.ends_with(suffix) ? g.name.substr(0, g.name.size() - suffix.size())
                                              : g.name + suffix;
  return InducingMap(General{std::move(name), g.inverse, g.forward});
}

}  // namespace pshift
