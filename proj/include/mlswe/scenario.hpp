#pragma once

#include <map>
#include <string>
#include <vector>

#include "mlswe/physics.hpp"
#include "mlswe/state.hpp"

namespace mlswe {

enum class SchemeKind { Theta, ImexArk2, Rk3Explicit };

enum class BathymetryKind { Flat, GaussianBump, CosinePeak, TanhRidge, Dune };

/// Complete description of one run. build_scenario fills the published
/// benchmark defaults; config files and CLI flags override fields.
struct ScenarioConfig {
  std::string name = "custom";

  double x_start = 0.0;
  double x_end = 1.0;
  int cells = 3;

  std::vector<LayerRegion> layer_regions;

  BathymetryKind bathymetry = BathymetryKind::Flat;
  std::vector<double> bathymetry_params;

  double eta_base = 0.0;   ///< initial free surface eta0 = eta_base + eta_slope x
  double eta_slope = 0.0;
  double q_initial = 0.0;  ///< initial uniform discharge; u = q/h per edge
  double tracer_initial = 1.0;

  BoundaryConditions bc;
  PhysicsParams physics;

  SchemeKind scheme = SchemeKind::Theta;
  double dt = 0.0;              ///< step for the semi-implicit schemes
  double theta = 0.55;
  double courant_target = 0.1;  ///< celerity Courant target for rk3

  double t_final = 0.0;
  std::vector<double> snapshots;  ///< output times; empty = {t_final}

  bool tracer = false;
  bool morphodynamics = false;
  bool spinup = false;  ///< derive the inflow profile from a precursor run

  std::string out_dir;
  std::string reference_dir;
};

/// Scenario names: free_oscillations, subcritical_peak, tidal_forcing,
/// sediment_dune. Throws ConfigError for an unknown name.
ScenarioConfig build_scenario(const std::string& name);

/// Bed elevation of the configured bathymetry at position x.
double bathymetry_at(const ScenarioConfig& cfg, double x);

/// Apply one "section.key = value" override; throws ConfigError on unknown
/// keys or malformed values.
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Parse a plain-text config file of [section] blocks with key = value lines
/// on top of `base` (a scenario named inside the file is loaded first).
ScenarioConfig parse_config_file(const std::string& path);

/// Round-trip helpers shared by the CLI.
SchemeKind parse_scheme(const std::string& name);
std::string scheme_name(SchemeKind scheme);
std::vector<LayerRegion> parse_layer_spec(const std::string& spec);

}  // namespace mlswe
