#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlswe/errors.hpp"
#include "mlswe/runner.hpp"
#include "mlswe/scenario.hpp"

namespace {

struct RunFlags {
  std::string scenario;
  std::string config;
  std::string scheme;
  std::string layers;
  std::string snapshots;
  std::string out_dir;
  std::string reference;
  std::string profile;
  std::vector<std::string> sets;
  double dt = -1.0;
  double theta = -1.0;
  double courant = -1.0;
  double tfinal = -1.0;
  bool tracer = false;
  bool morpho = false;
};

mlswe::ScenarioConfig assemble_config(const RunFlags& flags) {
  if (flags.config.empty() == flags.scenario.empty()) {
    throw mlswe::ConfigError("run needs exactly one of --scenario or --config");
  }
  mlswe::ScenarioConfig cfg = flags.config.empty()
                                  ? mlswe::build_scenario(flags.scenario)
                                  : mlswe::parse_config_file(flags.config);

  if (!flags.scheme.empty()) cfg.scheme = mlswe::parse_scheme(flags.scheme);
  if (flags.dt >= 0.0) cfg.dt = flags.dt;
  if (flags.theta >= 0.0) cfg.theta = flags.theta;
  if (flags.courant >= 0.0) cfg.courant_target = flags.courant;
  if (flags.tfinal >= 0.0) {
    cfg.t_final = flags.tfinal;
    std::erase_if(cfg.snapshots, [&](double t) { return t > cfg.t_final; });
  }
  if (!flags.snapshots.empty()) mlswe::apply_override(cfg, "time.snapshots", flags.snapshots);
  if (!flags.layers.empty()) cfg.layer_regions = mlswe::parse_layer_spec(flags.layers);
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (!flags.reference.empty()) cfg.reference_dir = flags.reference;
  if (!flags.profile.empty()) {
    mlswe::apply_override(cfg, "boundary.left_profile_file", flags.profile);
    cfg.spinup = false;
  }
  if (flags.tracer) cfg.tracer = true;
  if (flags.morpho) cfg.morphodynamics = true;
  for (const std::string& kv : flags.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw mlswe::ConfigError("--set expects key=value, got " + kv);
    }
    mlswe::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

int run_command(const RunFlags& flags) {
  mlswe::ScenarioConfig cfg = assemble_config(flags);
  if (cfg.out_dir.empty()) {
    throw mlswe::ConfigError("run needs --out DIR (or output.dir in the config)");
  }
  const mlswe::RunResult result = mlswe::run_scenario(cfg);
  for (const auto& [key, value] : result.metrics) {
    std::cout << key << "=" << value << "\n";
  }
  std::cout << "wrote " << result.snapshots.size() << " snapshot(s) to " << cfg.out_dir
            << "\n";
  return 0;
}

int validate_command(const std::string& config_path) {
  const mlswe::ScenarioConfig cfg = mlswe::parse_config_file(config_path);
  const mlswe::Simulation sim(cfg);
  std::cout << "configuration OK\n"
            << "scenario=" << cfg.name << "\n"
            << "cells=" << sim.grid().cells << "\n"
            << "edges=" << sim.grid().edges() << "\n"
            << "dof=" << sim.dof() << "\n"
            << "scheme=" << mlswe::scheme_name(cfg.scheme) << "\n"
            << "dt=" << cfg.dt << "\n"
            << "t_final=" << cfg.t_final << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D multilayer shallow water solver"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run = app.add_subcommand("run", "run a scenario and write snapshots");
  run->add_option("--scenario", flags.scenario,
                  "free_oscillations|subcritical_peak|tidal_forcing|sediment_dune");
  run->add_option("--config", flags.config, "config file (key = value sections)");
  run->add_option("--scheme", flags.scheme, "theta|imex|rk3");
  run->add_option("--dt", flags.dt, "time step for theta/imex [s]");
  run->add_option("--theta", flags.theta, "implicitness parameter");
  run->add_option("--courant", flags.courant, "celerity Courant target for rk3");
  run->add_option("--layers", flags.layers, "layer regions: file or x_lo:x_hi:N[:f,...];...");
  run->add_option("--tfinal", flags.tfinal, "final time [s]");
  run->add_option("--snapshots", flags.snapshots, "comma separated output times");
  run->add_option("--reference", flags.reference, "directory with reference snapshots");
  run->add_option("--out", flags.out_dir, "output directory");
  run->add_option("--profile", flags.profile, "inflow per-layer profile file");
  run->add_option("--set", flags.sets, "extra overrides as section.key=value");
  run->add_flag("--tracer", flags.tracer, "evolve the passive tracer");
  run->add_flag("--morphodynamics", flags.morpho, "evolve the bed");

  std::string config_path;
  CLI::App* validate = app.add_subcommand("validate", "check a config file");
  validate->add_option("--config", config_path, "config file")->required();

  try {
    app.parse(argc, argv);
    if (run->parsed()) return run_command(flags);
    if (validate->parsed()) return validate_command(config_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const mlswe::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const mlswe::SolverError& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
