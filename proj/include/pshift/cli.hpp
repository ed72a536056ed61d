#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pshift/serialize.hpp"

namespace pshift::cli {

using json::Json;

/// Exit codes shared by every command.
enum ExitCode : int {
  kOk = 0,
  kNegative = 1,  // no witness, failed verification, failed build
  kUsage = 2,     // schema or parameter error
};

struct CommandOutput {
  int exit_code = kOk;
  std::string document;     // JSON or CSV, written to --out or stdout
  std::string diagnostics;  // human-readable, written to stderr
};

struct FamilyRequest {
  bool inverse = false;
  std::vector<double> epsilons;
  std::vector<Index> radii;
  bool pretty = false;
};
CommandOutput run_family(const Json& params, const FamilyRequest& req);

struct WitnessRequest {
  double p = 2.0;
  double epsilon = 0.0;
  std::int64_t K = 1;
  std::int64_t n_max = 0;
  std::vector<SupportedVector> y_vectors;
  bool pretty = false;
};
CommandOutput run_witness(const Json& operators, const Json& targets, const WitnessRequest& req);
CommandOutput run_witness_verify(const Json& operators, const Json& certificate, bool pretty);

struct BuildRequest {
  double p = 2.0;
  double epsilon0 = 0.0;
  std::int64_t n_max_per_step = 0;
  bool pretty = false;
};
/// `targets` is a JSON array of vectors.
CommandOutput run_build(const Json& operators, const std::vector<SupportedVector>& targets,
                        const BuildRequest& req);
/// Uses the certificate's own operators unless `operators` is given.
CommandOutput run_build_verify(const Json& certificate, const std::optional<Json>& operators,
                               bool pretty);

struct OrbitRequest {
  double p = 2.0;
  std::int64_t n_max = 0;
  std::optional<SupportedVector> target;  // distances to 0 when absent
};
CommandOutput run_orbit(const Json& operators, const SupportedVector& x, const OrbitRequest& req);

struct DensityRequest {
  std::int64_t window = 0;
  std::int64_t m_max = 0;
  bool pretty = false;
};
CommandOutput run_density(const std::vector<std::int64_t>& set, const DensityRequest& req);

/// Joint return set from an orbit CSV: rows whose dist_i are all < delta.
std::vector<std::int64_t> return_set_from_csv(const std::string& csv, double delta);

/// Everything the command line can carry; `run` loads files and dispatches.
struct RunConfig {
  std::string command;     // family, witness, witness-verify, build, build-verify, orbit, density
  std::string params_path;
  std::string operators_path;
  std::string targets_path;
  std::string cert_path;
  std::string y_path;
  std::string x_path;
  std::string target_path;
  std::string set_path;
  std::string orbit_csv_path;
  std::string out_path;
  double p = 2.0;
  bool pretty = false;
  bool inverse = false;
  std::vector<double> epsilons;
  std::vector<Index> radii;
  double epsilon = 0.0;
  std::int64_t K = 1;
  std::int64_t n_max = 0;
  std::int64_t n_max_per_step = 0;
  double delta = 0.0;
  std::int64_t window = 0;
  std::int64_t m_max = 0;
  std::optional<Index> enum_radius;
  double enum_grid = 1.0;
  std::size_t enum_count = 0;
};

/// Runs a command and writes its document; returns the process exit code.
int run(const RunConfig& config);

}  // namespace pshift::cli
