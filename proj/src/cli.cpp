#include "pshift/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pshift/errors.hpp"

namespace pshift::cli {

namespace {

template <typename F>
CommandOutput guarded(F&& body) {
  try {
    return body();
  } catch (const ParameterError& e) {
    return {kUsage, "", std::string("parameter error: ") + e.what() + "\n"};
  } catch (const SchemaError& e) {
    return {kUsage, "", std::string("schema error: ") + e.what() + "\n"};
  } catch (const nlohmann::json::exception& e) {
    return {kUsage, "", std::string("schema error: ") + e.what() + "\n"};
  } catch (const std::runtime_error& e) {
    return {kUsage, "", std::string("error: ") + e.what() + "\n"};
  }
}

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError(std::string(name) + " must be > 0");
  }
}

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw ParameterError("--p must be in [1, inf)");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json(const std::string& path, const char* what) {
  if (path.empty()) throw ParameterError(std::string("missing ") + what + " document");
  try {
    return Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<SupportedVector> vector_list(const Json& j) {
  const Json& list = j.is_object() && j.contains("vectors") ? j.at("vectors") : j;
  if (!list.is_array()) throw SchemaError("expected an array of vectors");
  std::vector<SupportedVector> out;
  for (const auto& v : list) out.push_back(json::vector_from_json(v));
  return out;
}

std::vector<std::int64_t> integer_set(const Json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw SchemaError("expected an array of integers");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

const char* case_name(ThresholdCase c) {
  return c == ThresholdCase::EllGreaterThanI ? "ell_gt_i" : "i_gt_ell";
}

Json threshold_table(const FamilyParams& params, const std::vector<double>& epsilons,
                     const std::vector<Index>& radii, std::ostringstream& diag,
                     const char* label) {
  Json rows = Json::array();
  for (double eps : epsilons) {
    for (Index M : radii) {
      for (auto which : {ThresholdCase::EllGreaterThanI, ThresholdCase::IGreaterThanEll}) {
        double expr = threshold_expression(params, eps, M, which);
        auto k = threshold_k(params, eps, M, which);
        rows.push_back({{"epsilon", json::number(eps)},
                        {"M", M},
                        {"case", case_name(which)},
                        {"expression", json::number(expr)},
                        {"k", k}});
        diag << label << " eps=" << fmt(eps) << " M=" << M << " case=" << case_name(which)
             << " expression=" << fmt(expr) << " k=" << k << '\n';
      }
    }
  }
  return rows;
}

}  // namespace

CommandOutput run_family(const Json& params_doc, const FamilyRequest& req) {
  return guarded([&]() -> CommandOutput {
    auto params = json::family_params_from_json(params_doc);
    params.validate();
    for (double eps : req.epsilons) require_positive(eps, "--eps");
    for (Index M : req.radii) {
      if (M < 0) throw ParameterError("--M must be >= 0");
    }
    std::ostringstream diag;
    auto family = make_family(params);
    auto constants = derived_constants(params);
    diag << "gamma=" << fmt(constants.gamma) << " alpha=" << fmt(constants.alpha)
         << " beta=" << fmt(constants.beta) << " L=" << constants.L << '\n';

    Json out{{"params", json::to_json(params)},
             {"constants", json::to_json(constants)},
             {"operators", json::to_json(std::span<const PseudoShift>(family))},
             {"thresholds", threshold_table(params, req.epsilons, req.radii, diag, "threshold")}};
    if (req.inverse) {
      auto inverse = inverse_family(family);
      auto inv_params = inverse_family_params(params);
      out["inverse_operators"] = json::to_json(std::span<const PseudoShift>(inverse));
      out["inverse_constants"] = json::to_json(derived_constants(inv_params));
      out["inverse_thresholds"] =
          threshold_table(inv_params, req.epsilons, req.radii, diag, "inverse threshold");
    }
    return {kOk, json::dump(out, req.pretty), diag.str()};
  });
}

CommandOutput run_witness(const Json& operators, const Json& targets_doc,
                          const WitnessRequest& req) {
  return guarded([&]() -> CommandOutput {
    require_exponent(req.p);
    require_positive(req.epsilon, "--eps");
    if (req.K < 1) throw ParameterError("--K must be >= 1");
    if (req.n_max < req.K) throw ParameterError("--n-max must be >= --K");
    auto shifts = json::shifts_from_json(operators);
    auto targets = json::targets_from_json(targets_doc);
    auto result = find_witness(shifts, targets, req.p, req.epsilon, req.K, req.n_max, req.y_vectors);
    if (auto* cert = std::get_if<WitnessCertificate>(&result)) {
      return {kOk, json::dump(json::to_json(*cert), req.pretty),
              "witness at n=" + std::to_string(cert->n) + "\n"};
    }
    const auto& none = std::get<NoWitness>(result);
    std::ostringstream diag;
    diag << "no witness in [" << none.K << ", " << none.n_max << "]: blow_up=" << none.blow_up
         << " cross=" << none.cross << " gap=" << none.gap << " collapse=" << none.collapse << '\n';
    return {kNegative, json::dump(json::to_json(none), req.pretty), diag.str()};
  });
}

CommandOutput run_witness_verify(const Json& operators, const Json& certificate, bool pretty) {
  return guarded([&]() -> CommandOutput {
    auto shifts = json::shifts_from_json(operators);
    auto cert = json::certificate_from_json(certificate);
    auto report = verify_certificate(shifts, cert);
    return {report.all_pass() ? kOk : kNegative, json::dump(json::to_json(report), pretty),
            std::to_string(report.failures()) + " failed check(s)\n"};
  });
}

CommandOutput run_build(const Json& operators, const std::vector<SupportedVector>& targets,
                        const BuildRequest& req) {
  return guarded([&]() -> CommandOutput {
    require_exponent(req.p);
    require_positive(req.epsilon0, "--eps0");
    if (req.n_max_per_step < 1) throw ParameterError("--n-max-per-step must be >= 1");
    auto shifts = json::shifts_from_json(operators);
    auto result = build_dhc_vector(shifts, targets, req.epsilon0, req.p, req.n_max_per_step);
    if (auto* cert = std::get_if<ScheduleCertificate>(&result)) {
      return {kOk, json::dump(json::to_json(*cert), req.pretty),
              "built " + std::to_string(cert->steps.size()) + " step(s)\n"};
    }
    const auto& failure = std::get<ScheduleFailure>(result);
    return {kNegative, json::dump(json::to_json(failure), req.pretty),
            "no witness at step " + std::to_string(failure.step) + "\n"};
  });
}

CommandOutput run_build_verify(const Json& certificate, const std::optional<Json>& operators,
                               bool pretty) {
  return guarded([&]() -> CommandOutput {
    auto cert = json::schedule_from_json(certificate);
    auto shifts = operators ? json::shifts_from_json(*operators) : cert.operators;
    auto report = verify_schedule(shifts, cert);
    return {report.all_pass() ? kOk : kNegative, json::dump(json::to_json(report), pretty),
            std::to_string(report.failures()) + " failed check(s)\n"};
  });
}

CommandOutput run_orbit(const Json& operators, const SupportedVector& x, const OrbitRequest& req) {
  return guarded([&]() -> CommandOutput {
    require_exponent(req.p);
    if (req.n_max < 0) throw ParameterError("--n-max must be >= 0");
    auto shifts = json::shifts_from_json(operators);
    auto result = orbit(shifts, x, req.n_max, StatsMode{req.target.value_or(SupportedVector{}), req.p});
    return {kOk, orbit_csv(result), ""};
  });
}

CommandOutput run_density(const std::vector<std::int64_t>& set, const DensityRequest& req) {
  return guarded([&]() -> CommandOutput {
    if (req.window < 1) throw ParameterError("--window must be >= 1");
    if (req.m_max < 0) throw ParameterError("--m-max must be >= 0");
    auto est = upper_banach_density(set, req.window, req.m_max);
    return {kOk, json::dump(json::to_json(est), req.pretty), ""};
  });
}

std::vector<std::int64_t> return_set_from_csv(const std::string& csv, double delta) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("n")) throw SchemaError("orbit CSV header missing");
  std::vector<bool> is_dist;
  {
    std::istringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) is_dist.push_back(col.starts_with("dist_"));
  }
  std::vector<std::int64_t> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t col = 0;
    std::int64_t n = 0;
    bool inside = true;
    while (std::getline(row, cell, ',')) {
      if (col >= is_dist.size()) throw SchemaError("orbit CSV row wider than header");
      try {
        if (col == 0) {
          n = std::stoll(cell);
        } else if (is_dist[col]) {
          inside = inside && std::stod(cell) < delta;
        }
      } catch (const std::logic_error&) {
        throw SchemaError("orbit CSV cell '" + cell + "' is not a number");
      }
      ++col;
    }
    if (col != is_dist.size()) throw SchemaError("orbit CSV row narrower than header");
    if (inside) out.push_back(n);
  }
  return out;
}

int run(const RunConfig& c) {
  auto output = guarded([&]() -> CommandOutput {
    if (c.command == "family") {
      return run_family(read_json(c.params_path, "--params"),
                        {c.inverse, c.epsilons, c.radii, c.pretty});
    }
    if (c.command == "witness") {
      WitnessRequest req{c.p, c.epsilon, c.K, c.n_max, {}, c.pretty};
      if (!c.y_path.empty()) req.y_vectors = vector_list(read_json(c.y_path, "--y"));
      return run_witness(read_json(c.operators_path, "--operators"),
                         read_json(c.targets_path, "--targets"), req);
    }
    if (c.command == "witness-verify") {
      return run_witness_verify(read_json(c.operators_path, "--operators"),
                                read_json(c.cert_path, "--cert"), c.pretty);
    }
    if (c.command == "build") {
      std::vector<SupportedVector> targets;
      if (!c.targets_path.empty()) {
        targets = vector_list(read_json(c.targets_path, "--targets"));
      } else if (c.enum_radius) {
        targets = enumerate_targets(*c.enum_radius, c.enum_grid, c.enum_count);
      } else {
        throw ParameterError("build needs --targets or --enumerate");
      }
      return run_build(read_json(c.operators_path, "--operators"), targets,
                       {c.p, c.epsilon, c.n_max_per_step, c.pretty});
    }
    if (c.command == "build-verify") {
      std::optional<Json> ops;
      if (!c.operators_path.empty()) ops = read_json(c.operators_path, "--operators");
      return run_build_verify(read_json(c.cert_path, "--cert"), ops, c.pretty);
    }
    if (c.command == "orbit") {
      OrbitRequest req{c.p, c.n_max, std::nullopt};
      if (!c.target_path.empty()) req.target = json::vector_from_json(read_json(c.target_path, "--target"));
      return run_orbit(read_json(c.operators_path, "--operators"),
                       json::vector_from_json(read_json(c.x_path, "--x")), req);
    }
    if (c.command == "density") {
      std::vector<std::int64_t> set;
      if (!c.set_path.empty()) {
        set = integer_set(read_json(c.set_path, "--set"));
      } else if (!c.orbit_csv_path.empty()) {
        require_positive(c.delta, "--delta");
        set = return_set_from_csv(read_file(c.orbit_csv_path), c.delta);
      } else {
        throw ParameterError("density needs --set or --orbit-csv");
      }
      return run_density(set, {c.window, c.m_max, c.pretty});
    }
    throw ParameterError("unknown command '" + c.command + "'");
  });

  if (!output.diagnostics.empty()) std::cerr << output.diagnostics;
  if (!output.document.empty()) {
    if (c.out_path.empty()) {
      std::cout << output.document;
    } else {
      std::ofstream out(c.out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << c.out_path << "'\n";
        return kUsage;
      }
      out << output.document;
    }
  }
  return output.exit_code;
}

}  // namespace pshift::cli
