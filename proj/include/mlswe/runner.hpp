#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mlswe/metrics.hpp"
#include "mlswe/scenario.hpp"
#include "mlswe/steppers.hpp"

namespace mlswe {

/// Owns the grid, layout and stepper for one configured run and advances the
/// state step by step with the output-time landing rule.
class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);

  const Grid1D& grid() const { return grid_; }
  const LayerLayout& layout() const { return layout_; }
  const ScenarioConfig& config() const { return cfg_; }
  const State& state() const { return state_; }
  State& state() { return state_; }
  long long dof() const { return layout_.dof(); }

  /// One step of the configured scheme, truncated so the run lands exactly on
  /// t_limit. Returns the report of the step taken.
  StepReport advance(double t_limit);

  /// Convenience: advance until `t` (within rounding), collecting maxima.
  void run_until(double t);

  double max_c_vel() const { return max_c_vel_; }
  double max_c_cel() const { return max_c_cel_; }
  double max_fs_residual() const { return max_residual_; }
  long long steps_taken() const { return steps_; }

 private:
  ScenarioConfig cfg_;
  Grid1D grid_;
  LayerLayout layout_;
  State state_;
  std::unique_ptr<ThetaStepper> theta_;
  std::unique_ptr<ImexArk2Stepper> imex_;
  std::unique_ptr<Rk3Stepper> rk3_;
  double max_c_vel_ = 0.0;
  double max_c_cel_ = 0.0;
  double max_residual_ = 0.0;
  long long steps_ = 0;
};

/// Initial state for a configuration (bathymetry, sloped surface, uniform
/// discharge distributed with the inflow profile, uniform tracer).
State make_initial_state(const ScenarioConfig& cfg, const Grid1D& grid,
                         const LayerLayout& layout);

struct RunResult {
  std::vector<std::pair<double, State>> snapshots;
  std::vector<std::pair<std::string, std::string>> metrics;
  long long dof = 0;
  double wall_seconds = 0.0;
  double max_c_vel = 0.0;
  double max_c_cel = 0.0;
};

/// Execute a configured run. Writes one CSV (plus a binary state twin) per
/// snapshot and a metrics file when cfg.out_dir is set; computes errors
/// against reference states from cfg.reference_dir when given. The sediment
/// scenario runs its inflow spin-up first when requested.
RunResult run_scenario(const ScenarioConfig& cfg);

/// Precursor run for the sediment benchmark: uniform inflow until the outlet
/// velocity profile stabilizes; returns the normalized per-layer shape.
std::vector<double> sediment_spinup_profile(const ScenarioConfig& cfg);

/// Plain-text per-layer profile file (one value per line, 17 significant digits).
void write_profile(const std::string& path, const std::vector<double>& profile);
std::vector<double> read_profile(const std::string& path);

/// Snapshot state IO used for reference comparisons.
void write_state_file(const std::string& path, const State& state);
State read_state_file(const std::string& path);

/// CSV snapshot: x,eta,b,h,u_1..u_Nmax,w_1..w_Nmax+1 with nan padding beyond
/// each column's local layer count.
void write_snapshot_csv(const std::string& path, const Grid1D& grid,
                        const LayerLayout& layout, const State& state);

}  // namespace mlswe
