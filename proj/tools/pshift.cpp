#include <CLI11.hpp>

#include "pshift/cli.hpp"

int main(int argc, char** argv) {
  using pshift::cli::RunConfig;

  CLI::App app{"Weighted pseudo-shifts on l^p(Z): disjoint hypercyclicity witnesses, "
               "schedules, orbits and densities"};
  app.require_subcommand(1);

  RunConfig c;
  auto common = [&c](CLI::App* cmd) {
    cmd->add_option("--p", c.p, "l^p exponent")->capture_default_str();
    cmd->add_option("--out", c.out_path, "Output file (default stdout)");
    cmd->add_flag("--pretty", c.pretty, "Indented JSON");
  };

  auto* family = app.add_subcommand("family", "Generate the two-level translation family");
  common(family);
  family->add_option("--params", c.params_path, "FamilyParams JSON")->required();
  family->add_flag("--inverse", c.inverse, "Also emit the inverse family");
  family->add_option("--eps", c.epsilons, "Threshold table epsilons");
  family->add_option("--M", c.radii, "Threshold table radii");

  auto* witness = app.add_subcommand("witness", "Search for a blow-up/collapse witness");
  common(witness);
  witness->add_option("--operators", c.operators_path, "Operator descriptions JSON");
  witness->add_option("--targets", c.targets_path, "Target family JSON");
  witness->add_option("--y", c.y_path, "Collapse vectors JSON (array of vectors)");
  witness->add_option("--eps", c.epsilon, "Tolerance epsilon");
  witness->add_option("--K", c.K, "Smallest admissible n")->capture_default_str();
  witness->add_option("--n-max", c.n_max, "Largest n scanned");
  auto* witness_verify = witness->add_subcommand("verify", "Re-check a witness certificate");
  common(witness_verify);
  witness_verify->add_option("--operators", c.operators_path)->required();
  witness_verify->add_option("--cert", c.cert_path)->required();

  auto* build = app.add_subcommand("build", "Greedy approximate disjoint hypercyclic vector");
  common(build);
  build->add_option("--operators", c.operators_path, "Operator descriptions JSON");
  build->add_option("--targets", c.targets_path, "Targets JSON (array of vectors)");
  std::vector<double> enumerate;
  build->add_option("--enumerate", enumerate, "M_max grid count")->expected(3);
  build->add_option("--eps0", c.epsilon, "Initial tolerance");
  build->add_option("--n-max-per-step", c.n_max_per_step, "Witness scan length per step");
  auto* build_verify = build->add_subcommand("verify", "Re-check a schedule certificate");
  common(build_verify);
  build_verify->add_option("--cert", c.cert_path)->required();
  build_verify->add_option("--operators", c.operators_path, "Override the certificate's operators");

  auto* orbit = app.add_subcommand("orbit", "Joint orbit norms and distances as CSV");
  common(orbit);
  orbit->add_option("--operators", c.operators_path)->required();
  orbit->add_option("--x", c.x_path, "Starting vector JSON")->required();
  orbit->add_option("--target", c.target_path, "Distance target JSON (default 0)");
  orbit->add_option("--n-max", c.n_max)->required();

  auto* density = app.add_subcommand("density", "Finite upper Banach density estimate");
  common(density);
  density->add_option("--set", c.set_path, "JSON array of nonnegative integers");
  density->add_option("--orbit-csv", c.orbit_csv_path, "Orbit CSV; uses its joint return set");
  density->add_option("--delta", c.delta, "Return radius for --orbit-csv");
  density->add_option("--window", c.window, "Window length N")->required();
  density->add_option("--m-max", c.m_max, "Largest window offset")->required();

  CLI11_PARSE(app, argc, argv);

  if (witness_verify->parsed()) {
    c.command = "witness-verify";
  } else if (witness->parsed()) {
    c.command = "witness";
  } else if (build_verify->parsed()) {
    c.command = "build-verify";
  } else if (build->parsed()) {
    c.command = "build";
    if (!enumerate.empty()) {
      c.enum_radius = static_cast<pshift::Index>(enumerate[0]);
      c.enum_grid = enumerate[1];
      c.enum_count = static_cast<std::size_t>(enumerate[2]);
    }
  } else {
    c.command = app.get_subcommands().front()->get_name();
  }
  return pshift::cli::run(c);
}
