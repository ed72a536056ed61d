#include "pshift/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>

#include "pshift/errors.hpp"

namespace pshift::json {

namespace {

[[noreturn]] void schema(const std::string& what) { throw SchemaError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) schema(std::string("expected an object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string("missing key '") + key + "'");
  return *it;
}

double as_number(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  schema("expected a number for " + where);
}

std::int64_t as_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) schema("expected an integer for " + where);
  return j.get<std::int64_t>();
}

std::int64_t get_integer(const Json& j, const char* key) { return as_integer(field(j, key), key); }

std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) schema("expected an array for " + where);
  std::vector<double> out;
  for (const auto& v : j) out.push_back(as_number(v, where));
  return out;
}

std::vector<std::int64_t> integer_list(const Json& j, const std::string& where) {
  if (!j.is_array()) schema("expected an array for " + where);
  std::vector<std::int64_t> out;
  for (const auto& v : j) out.push_back(as_integer(v, where));
  return out;
}

Json number_array(const std::vector<double>& values) {
  Json out = Json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

std::string kind_of(const Json& j) {
  const auto& k = field(j, "kind");
  if (!k.is_string()) schema("'kind' must be a string");
  return k.get<std::string>();
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_number(const Json& j, const char* key) { return as_number(field(j, key), key); }

// --- vectors ---------------------------------------------------------------

Json coefficient(const ExtReal& c) {
  const double d = c.to_double();
  if (!c.is_finite() || (std::isnormal(d) && ExtReal(d) == c)) return number(d);
  // Outside the double range: hex-float text with an unbounded binary exponent.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", 2.0 * c.mantissa());
  std::string text(buf);
  return text.substr(0, text.find('p')) + "p" + std::to_string(c.exponent() - 1);
}

ExtReal coefficient_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    auto p = s.find('p');
    if (s.find("0x") != std::string::npos && p != std::string::npos) {
      const std::string head = s.substr(0, p) + "p0";
      char* end = nullptr;
      double m = std::strtod(head.c_str(), &end);
      std::size_t used = 0;
      std::int64_t e = 0;
      try {
        e = std::stoll(s.substr(p + 1), &used);
      } catch (const std::exception&) {
        schema("malformed coefficient '" + s + "' for " + where);
      }
      if (end != head.c_str() + head.size() || used != s.size() - p - 1 || !std::isfinite(m)) {
        schema("malformed coefficient '" + s + "' for " + where);
      }
      return ExtReal::ldexp(m, e);
    }
  }
  return as_number(j, where);
}

Json to_json(const SupportedVector& v) {
  Json out = Json::array();
  for (const auto& [j, c] : v) out.push_back(Json::array({j, coefficient(c)}));
  return out;
}

SupportedVector vector_from_json(const Json& j) {
  if (!j.is_array()) schema("vector must be an array of [index, coefficient] pairs");
  SupportedVector v;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2) schema("vector entries must be [index, coefficient]");
    Index idx = as_integer(entry[0], "vector index");
    if (!v.coefficient(idx).is_zero()) schema("duplicate vector index " + std::to_string(idx));
    v.set(idx, coefficient_from_json(entry[1], "vector coefficient"));
  }
  return v;
}

// --- operators -------------------------------------------------------------

Json to_json(const InducingMap& map) {
  if (auto step = map.step()) return {{"kind", "translation"}, {"step", *step}};
  return {{"kind", "general"}, {"rule", map.rule_name()}};
}

InducingMap map_from_json(const Json& j) {
  const auto kind = kind_of(j);
  if (kind == "translation") return InducingMap::translation(get_integer(j, "step"));
  if (kind == "general") {
    const auto& rule = field(j, "rule");
    if (!rule.is_string()) schema("'rule' must be a string");
    return InducingMap::named(rule.get<std::string>());
  }
  schema("unknown map kind '" + kind + "'");
}

Json to_json(const WeightRule& rule) {
  return std::visit(
      [](const auto& k) -> Json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, WeightRule::TwoLevel>) {
          return {{"kind", "two_level"},
                  {"params", {{"lambda", number(k.lambda)}, {"cutoff", k.cutoff}}}};
        } else if constexpr (std::is_same_v<K, WeightRule::Table>) {
          Json entries = Json::array();
          for (const auto& [n, w] : k.entries) entries.push_back(Json::array({n, number(w)}));
          return {{"kind", "table"},
                  {"params", {{"entries", entries}, {"default", number(k.fallback)}}}};
        } else if constexpr (std::is_same_v<K, WeightRule::Periodic>) {
          return {{"kind", "periodic"}, {"params", {{"values", number_array(k.values)}}}};
        } else if constexpr (std::is_same_v<K, WeightRule::Decaying>) {
          return {{"kind", "decaying"},
                  {"params", {{"scale", number(k.scale)}, {"exponent", number(k.exponent)}}}};
        } else {
          return {{"kind", "reciprocal_pullback"},
                  {"params", {{"inner", to_json(*k.inner)}, {"map", to_json(k.map)}}}};
        }
      },
      rule.kind());
}

WeightRule weights_from_json(const Json& j) {
  const auto kind = kind_of(j);
  const auto& params = field(j, "params");
  if (kind == "two_level") {
    return WeightRule::two_level(get_number(params, "lambda"), get_integer(params, "cutoff"));
  }
  if (kind == "constant") return WeightRule::constant(get_number(params, "value"));
  if (kind == "table") {
    std::map<Index, double> entries;
    const auto& list = field(params, "entries");
    if (!list.is_array()) schema("table entries must be an array");
    for (const auto& e : list) {
      if (!e.is_array() || e.size() != 2) schema("table entries must be [index, weight]");
      entries[as_integer(e[0], "table index")] = as_number(e[1], "table weight");
    }
    return WeightRule::table(std::move(entries), get_number(params, "default"));
  }
  if (kind == "periodic") return WeightRule::periodic(number_list(field(params, "values"), "values"));
  if (kind == "decaying") {
    return WeightRule::decaying(get_number(params, "scale"), get_number(params, "exponent"));
  }
  if (kind == "reciprocal_pullback") {
    return WeightRule::reciprocal_pullback(weights_from_json(field(params, "inner")),
                                           map_from_json(field(params, "map")));
  }
  schema("unknown weight kind '" + kind + "'");
}

Json to_json(const PseudoShift& shift) {
  return {{"name", shift.name()}, {"map", to_json(shift.map())}, {"weights", to_json(shift.weights())}};
}

PseudoShift shift_from_json(const Json& j) {
  const auto& name = field(j, "name");
  if (!name.is_string()) schema("operator 'name' must be a string");
  return {name.get<std::string>(), map_from_json(field(j, "map")),
          weights_from_json(field(j, "weights"))};
}

Json to_json(std::span<const PseudoShift> shifts) {
  Json out = Json::array();
  for (const auto& s : shifts) out.push_back(to_json(s));
  return out;
}

std::vector<PseudoShift> shifts_from_json(const Json& j) {
  const Json& list = j.is_object() ? field(j, "operators") : j;
  if (!list.is_array()) schema("expected an array of operator descriptions");
  std::vector<PseudoShift> out;
  for (const auto& s : list) out.push_back(shift_from_json(s));
  return out;
}

// --- targets and family ----------------------------------------------------

Json to_json(const TargetFamily& targets) {
  Json rows = Json::array();
  for (const auto& row : targets.coefficients()) rows.push_back(number_array(row));
  return {{"M", targets.M()}, {"coefficients", rows}};
}

TargetFamily targets_from_json(const Json& j) {
  if (!j.is_object()) schema("target family must be an object");
  if (j.contains("vectors")) {
    std::vector<SupportedVector> vectors;
    const auto& list = j.at("vectors");
    if (!list.is_array()) schema("'vectors' must be an array");
    for (const auto& v : list) vectors.push_back(vector_from_json(v));
    std::optional<Index> M;
    if (j.contains("M")) M = get_integer(j, "M");
    return TargetFamily::from_vectors(vectors, M);
  }
  const auto& rows = field(j, "coefficients");
  if (!rows.is_array()) schema("'coefficients' must be an array of arrays");
  std::vector<std::vector<double>> coefficients;
  for (const auto& row : rows) coefficients.push_back(number_list(row, "coefficients"));
  return TargetFamily(get_integer(j, "M"), std::move(coefficients));
}

Json to_json(const FamilyParams& params) {
  return {{"N", params.size()},
          {"steps", params.steps},
          {"lambdas", number_array(params.lambdas)},
          {"cutoffs", params.cutoffs},
          {"p", number(params.p)}};
}

FamilyParams family_params_from_json(const Json& j) {
  FamilyParams params;
  params.steps = integer_list(field(j, "steps"), "steps");
  params.lambdas = number_list(field(j, "lambdas"), "lambdas");
  params.cutoffs = integer_list(field(j, "cutoffs"), "cutoffs");
  if (j.contains("p")) params.p = get_number(j, "p");
  if (j.contains("N") && static_cast<std::size_t>(get_integer(j, "N")) != params.steps.size()) {
    schema("'N' does not match the number of steps");
  }
  return params;
}

Json to_json(const FamilyConstants& c) {
  return {{"gamma", number(c.gamma)}, {"alpha", number(c.alpha)}, {"beta", number(c.beta)}, {"L", c.L}};
}

// --- witness certificates ----------------------------------------------------

Json to_json(const WitnessCertificate& cert) {
  Json perturbations = Json::array();
  for (const auto& p : cert.perturbations) {
    perturbations.push_back({{"operator", p.op + 1}, {"index", p.index}, {"value", number(p.value)}});
  }
  Json ys = Json::array();
  for (const auto& y : cert.y_vectors) ys.push_back(to_json(y));
  Json collapse = Json::array();
  for (const auto& row : cert.collapse_residuals) collapse.push_back(number_array(row));
  return {{"status", "witness"},
          {"n", cert.n},
          {"z", to_json(cert.z)},
          {"z_norm", number(cert.z_norm)},
          {"residuals", number_array(cert.residuals)},
          {"bounds", number_array(cert.bounds.residual_bounds)},
          {"z_bound", number(cert.bounds.z_bound)},
          {"epsilon", number(cert.epsilon)},
          {"K", cert.K},
          {"M", cert.M},
          {"p", number(cert.p)},
          {"targets", to_json(cert.targets)},
          {"perturbations", perturbations},
          {"y_vectors", ys},
          {"collapse_residuals", collapse}};
}

WitnessCertificate certificate_from_json(const Json& j) {
  WitnessCertificate cert;
  cert.n = get_integer(j, "n");
  cert.z = vector_from_json(field(j, "z"));
  cert.z_norm = get_number(j, "z_norm");
  cert.residuals = number_list(field(j, "residuals"), "residuals");
  cert.bounds.residual_bounds = number_list(field(j, "bounds"), "bounds");
  cert.bounds.z_bound = get_number(j, "z_bound");
  cert.epsilon = get_number(j, "epsilon");
  cert.K = get_integer(j, "K");
  cert.M = get_integer(j, "M");
  cert.p = j.contains("p") ? get_number(j, "p") : 2.0;
  cert.targets = targets_from_json(field(j, "targets"));
  if (cert.targets.M() != cert.M) schema("certificate 'M' disagrees with its targets");
  if (j.contains("perturbations")) {
    for (const auto& p : j.at("perturbations")) {
      auto op = get_integer(p, "operator");
      if (op < 1) schema("perturbation operators are 1-based");
      cert.perturbations.push_back(
          {static_cast<std::size_t>(op - 1), get_integer(p, "index"), get_number(p, "value")});
    }
  }
  if (j.contains("y_vectors")) {
    for (const auto& y : j.at("y_vectors")) cert.y_vectors.push_back(vector_from_json(y));
  }
  if (j.contains("collapse_residuals")) {
    for (const auto& row : j.at("collapse_residuals")) {
      cert.collapse_residuals.push_back(number_list(row, "collapse_residuals"));
    }
  }
  return cert;
}

Json to_json(const NoWitness& none) {
  Json by_n = Json::array();
  for (const auto& f : none.by_n) {
    Json failed = Json::array();
    if (f.failed & kBlowUp) failed.push_back("blow_up");
    if (f.failed & kCross) failed.push_back("cross");
    if (f.failed & kGap) failed.push_back("gap");
    if (f.failed & kCollapse) failed.push_back("collapse");
    if (f.failed & kZNormCap) failed.push_back("z_norm_cap");
    by_n.push_back({{"n", f.n}, {"failed", failed}});
  }
  return {{"status", "no_witness"},
          {"K", none.K},
          {"n_max", none.n_max},
          {"failures",
           {{"blow_up", none.blow_up},
            {"cross", none.cross},
            {"gap", none.gap},
            {"collapse", none.collapse},
            {"z_norm_cap", none.z_norm_cap}}},
          {"by_n", by_n}};
}

// --- schedules -------------------------------------------------------------

Json to_json(const ScheduleCertificate& cert) {
  Json steps = Json::array();
  for (const auto& s : cert.steps) {
    steps.push_back({{"k", s.k},
                     {"target", to_json(s.target)},
                     {"n", s.n},
                     {"epsilon", number(s.epsilon)},
                     {"z", to_json(s.z)},
                     {"residuals", number_array(s.residuals)}});
  }
  return {{"operators", to_json(std::span<const PseudoShift>(cert.operators))},
          {"p", number(cert.p)},
          {"epsilon0", number(cert.epsilon0)},
          {"steps", steps},
          {"x", to_json(cert.x)}};
}

ScheduleCertificate schedule_from_json(const Json& j) {
  ScheduleCertificate cert;
  cert.operators = shifts_from_json(field(j, "operators"));
  cert.p = get_number(j, "p");
  cert.epsilon0 = get_number(j, "epsilon0");
  const auto& steps = field(j, "steps");
  if (!steps.is_array()) schema("'steps' must be an array");
  for (const auto& s : steps) {
    ScheduleStep step;
    auto k = get_integer(s, "k");
    if (k < 1) schema("step 'k' is 1-based");
    step.k = static_cast<std::size_t>(k);
    step.target = vector_from_json(field(s, "target"));
    step.n = get_integer(s, "n");
    step.epsilon = get_number(s, "epsilon");
    step.z = vector_from_json(field(s, "z"));
    step.residuals = number_list(field(s, "residuals"), "residuals");
    cert.steps.push_back(std::move(step));
  }
  cert.x = vector_from_json(field(j, "x"));
  return cert;
}

Json to_json(const ScheduleFailure& failure) {
  return {{"status", "failed"},
          {"step", failure.step},
          {"diagnosis", to_json(failure.diagnosis)},
          {"partial", to_json(failure.partial)}};
}

// --- reports ---------------------------------------------------------------

Json to_json(const DensityEstimate& est) {
  return {{"N", est.window},
          {"m_max", est.m_max},
          {"value", number(est.value)},
          {"set_size", est.set_size},
          {"best_count", est.best_count}};
}

Json to_json(const VerificationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"claimed", number(c.claimed)},
                      {"recomputed", number(c.recomputed)},
                      {"pass", c.pass}});
  }
  return {{"all_pass", report.all_pass()}, {"failures", report.failures()}, {"checks", checks}};
}

std::string dump(const Json& j, bool pretty) { return j.dump(pretty ? 2 : -1) + "\n"; }

}  // namespace pshift::json
