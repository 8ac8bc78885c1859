#include "mlswe/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mlswe/errors.hpp"
#include "mlswe/operators.hpp"

namespace mlswe {

namespace {

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string snapshot_name(int index, const char* ext) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "snapshot_%03d.%s", index, ext);
  return buf;
}

double edge_depth(const ScenarioConfig& cfg, const Grid1D& grid, const State& state,
                  int e) {
  const int m = grid.cells;
  if (e == 0) return state.depth(0);
  if (e == m) return state.depth(m - 1);
  (void)cfg;
  return 0.5 * (state.depth(e - 1) + state.depth(e));
}

}  // namespace

State make_initial_state(const ScenarioConfig& cfg, const Grid1D& grid,
                         const LayerLayout& layout) {
  State s = State::zeros(grid, layout);
  for (int i = 0; i < grid.cells; ++i) {
    s.bed[i] = bathymetry_at(cfg, grid.x_center[i]);
    s.eta[i] = cfg.eta_base + cfg.eta_slope * grid.x_center[i];
    if (!(s.depth(i) > 0.0)) {
      throw ConfigError("initial state dry at x = " + std::to_string(grid.x_center[i]));
    }
  }
  std::fill(s.rho.begin(), s.rho.end(), cfg.tracer_initial);

  if (cfg.q_initial != 0.0) {
    const std::vector<double>& profile = cfg.bc.left.profile;
    for (int e = 0; e <= grid.cells; ++e) {
      const double h = edge_depth(cfg, grid, s, e);
      const int n = layout.edge_count(e);
      const int off = layout.edge_offset(e);
      const bool use_profile = static_cast<int>(profile.size()) == n;
      for (int a = 0; a < n; ++a) {
        const double shape = use_profile ? profile[a] : 1.0;
        s.u[off + a] = shape * cfg.q_initial / h;
      }
    }
  }
  return s;
}

Simulation::Simulation(const ScenarioConfig& cfg)
    : cfg_(cfg), grid_(build_grid(cfg.x_start, cfg.x_end, cfg.cells)),
      layout_(build_layout(grid_, cfg.layer_regions)) {
  cfg_.physics.validate();
  if (cfg_.scheme != SchemeKind::Rk3Explicit && !(cfg_.dt > 0.0)) {
    throw ConfigError("semi-implicit schemes need a positive time step");
  }
  state_ = make_initial_state(cfg_, grid_, layout_);

  StepperOptions options;
  options.tracer = cfg_.tracer;
  options.morphodynamics = cfg_.morphodynamics;
  switch (cfg_.scheme) {
    case SchemeKind::Theta:
      theta_ = std::make_unique<ThetaStepper>(grid_, layout_, cfg_.physics, cfg_.bc,
                                              cfg_.theta, options);
      break;
    case SchemeKind::ImexArk2:
      imex_ = std::make_unique<ImexArk2Stepper>(grid_, layout_, cfg_.physics, cfg_.bc,
                                                options);
      break;
    case SchemeKind::Rk3Explicit:
      rk3_ = std::make_unique<Rk3Stepper>(grid_, layout_, cfg_.physics, cfg_.bc,
                                          cfg_.courant_target, options);
      break;
  }
}

StepReport Simulation::advance(double t_limit) {
  const double remaining = t_limit - state_.time;
  StepReport report;
  if (!(remaining > 0.0)) return report;

  if (rk3_) {
    report = rk3_->step(state_, remaining);
  } else {
    const double dt = std::min(cfg_.dt, remaining);
    report = theta_ ? theta_->step(state_, dt) : imex_->step(state_, dt);
  }
  max_c_vel_ = std::max(max_c_vel_, report.c_vel);
  max_c_cel_ = std::max(max_c_cel_, report.c_cel);
  max_residual_ = std::max(max_residual_, report.fs_residual);
  ++steps_;
  return report;
}

void Simulation::run_until(double t) {
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  while (state_.time < t - tol) advance(t);
  state_.time = t;
}

std::vector<double> sediment_spinup_profile(const ScenarioConfig& cfg) {
  ScenarioConfig pre = cfg;
  pre.spinup = false;
  pre.tracer = false;
  pre.bc.left.profile.clear();
  pre.scheme = SchemeKind::Theta;
  if (!(pre.dt > 0.0)) pre.dt = 2.0;
  pre.out_dir.clear();
  pre.reference_dir.clear();

  Simulation sim(pre);
  const LayerLayout& layout = sim.layout();
  const int outlet = sim.grid().cells;
  const int n = layout.edge_count(outlet);
  const int off = layout.edge_offset(outlet);
  const LayerScheme& scheme = layout.edge_scheme(outlet);

  auto shape = [&]() {
    std::vector<double> s(n, 1.0);
    double ubar = 0.0;
    for (int a = 0; a < n; ++a) ubar += scheme.fractions[a] * sim.state().u[off + a];
    if (std::abs(ubar) < 1e-14) return s;
    for (int a = 0; a < n; ++a) s[a] = sim.state().u[off + a] / ubar;
    return s;
  };

  std::vector<double> previous = shape();
  const double t_cap = pre.t_final;
  int since_check = 0;
  while (sim.state().time < t_cap) {
    sim.advance(t_cap);
    if (++since_check < 100) continue;
    since_check = 0;
    std::vector<double> current = shape();
    double change = 0.0;
    double scale = 0.0;
    for (int a = 0; a < n; ++a) {
      change = std::max(change, std::abs(current[a] - previous[a]));
      scale = std::max(scale, std::abs(current[a]));
    }
    previous = std::move(current);
    if (change <= 1e-8 * std::max(scale, 1.0)) break;
  }
  return previous;
}

void write_profile(const std::string& path, const std::vector<double>& profile) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write profile file: " + path);
  for (double v : profile) out << fmt17(v) << "\n";
}

std::vector<double> read_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open profile file: " + path);
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  return values;
}

void write_state_file(const std::string& path, const State& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write state file: " + path);
  const char magic[8] = {'M', 'L', 'S', 'W', 'E', 'S', 'T', '1'};
  out.write(magic, sizeof(magic));
  const std::int64_t sizes[3] = {static_cast<std::int64_t>(state.eta.size()),
                                 static_cast<std::int64_t>(state.u.size()),
                                 static_cast<std::int64_t>(state.rho.size())};
  out.write(reinterpret_cast<const char*>(sizes), sizeof(sizes));
  out.write(reinterpret_cast<const char*>(&state.time), sizeof(double));
  auto dump = [&](const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  };
  dump(state.eta);
  dump(state.u);
  dump(state.rho);
  dump(state.bed);
}

State read_state_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open state file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (std::string(magic, 8) != "MLSWEST1") {
    throw ConfigError("not a state file: " + path);
  }
  std::int64_t sizes[3];
  in.read(reinterpret_cast<char*>(sizes), sizeof(sizes));
  State s;
  in.read(reinterpret_cast<char*>(&s.time), sizeof(double));
  auto load = [&](std::vector<double>& v, std::int64_t count) {
    v.resize(static_cast<std::size_t>(count));
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
  };
  load(s.eta, sizes[0]);
  load(s.u, sizes[1]);
  load(s.rho, sizes[2]);
  load(s.bed, sizes[0]);
  if (!in) throw ConfigError("truncated state file: " + path);
  return s;
}

void write_snapshot_csv(const std::string& path, const Grid1D& grid,
                        const LayerLayout& layout, const State& state) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write snapshot: " + path);

  const int nmax = layout.max_cell_count();
  out << "x,eta,b,h";
  for (int a = 1; a <= nmax; ++a) out << ",u_" << a;
  for (int k = 1; k <= nmax + 1; ++k) out << ",w_" << k;
  out << "\n";

  std::vector<double> w_minus(nmax + 1), w_plus(nmax + 1);
  for (int i = 0; i < grid.cells; ++i) {
    const int cs = layout.cell_scheme_id(i);
    const int n = layout.cell_count(i);
    out << fmt17(grid.x_center[i]) << ',' << fmt17(state.eta[i]) << ','
        << fmt17(state.bed[i]) << ',' << fmt17(state.depth(i));
    for (int a = 0; a < nmax; ++a) {
      if (a < n) {
        const double ul = mapped_edge_value(layout, state.u, i, cs, a);
        const double ur = mapped_edge_value(layout, state.u, i + 1, cs, a);
        out << ',' << fmt17(0.5 * (ul + ur));
      } else {
        out << ",nan";
      }
    }
    recover_vertical_velocity(grid, layout, state, i,
                              std::span<double>(w_minus.data(), n + 1),
                              std::span<double>(w_plus.data(), n + 1));
    for (int k = 0; k <= nmax; ++k) {
      if (k <= n) {
        out << ',' << fmt17(0.5 * (w_minus[k] + w_plus[k]));
      } else {
        out << ",nan";
      }
    }
    out << "\n";
  }
}

RunResult run_scenario(const ScenarioConfig& cfg) {
  ScenarioConfig run_cfg = cfg;

  if (!run_cfg.out_dir.empty()) {
    std::filesystem::create_directories(run_cfg.out_dir);
  }

  if (run_cfg.spinup && run_cfg.bc.left.kind == BoundaryKind::Discharge &&
      run_cfg.bc.left.profile.empty()) {
    run_cfg.bc.left.profile = sediment_spinup_profile(run_cfg);
    if (!run_cfg.out_dir.empty()) {
      write_profile(run_cfg.out_dir + "/inflow_profile.txt", run_cfg.bc.left.profile);
    }
  }

  Simulation sim(run_cfg);

  std::vector<double> snapshots = run_cfg.snapshots;
  if (snapshots.empty()) snapshots.push_back(run_cfg.t_final);
  std::sort(snapshots.begin(), snapshots.end());
  for (double t : snapshots) {
    if (t > run_cfg.t_final + 1e-9 * std::max(1.0, run_cfg.t_final)) {
      throw ConfigError("snapshot time beyond t_final");
    }
  }

  RunResult result;
  result.dof = sim.dof();

  const auto t_begin = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < snapshots.size(); ++k) {
    sim.run_until(snapshots[k]);
    result.snapshots.emplace_back(snapshots[k], sim.state());
  }
  const auto t_end = std::chrono::steady_clock::now();
  result.wall_seconds = std::chrono::duration<double>(t_end - t_begin).count();
  result.max_c_vel = sim.max_c_vel();
  result.max_c_cel = sim.max_c_cel();

  auto add = [&](const std::string& key, const std::string& value) {
    result.metrics.emplace_back(key, value);
  };
  add("scenario", run_cfg.name);
  add("scheme", scheme_name(run_cfg.scheme));
  if (run_cfg.scheme == SchemeKind::Rk3Explicit) {
    add("courant_target", fmt17(run_cfg.courant_target));
  } else {
    add("dt", fmt17(run_cfg.dt));
  }
  if (run_cfg.scheme == SchemeKind::Theta) add("theta", fmt17(run_cfg.theta));
  add("cells", std::to_string(run_cfg.cells));
  add("dof", std::to_string(result.dof));
  add("steps", std::to_string(sim.steps_taken()));
  add("t_final", fmt17(sim.state().time));
  add("c_vel_max", fmt17(result.max_c_vel));
  add("c_cel_max", fmt17(result.max_c_cel));
  add("fs_residual_max", fmt17(sim.max_fs_residual()));
  add("wall_s", fmt17(result.wall_seconds));

  if (!run_cfg.reference_dir.empty()) {
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
      const std::string ref_path =
          run_cfg.reference_dir + "/" + snapshot_name(static_cast<int>(k), "state");
      const State ref = read_state_file(ref_path);
      const ErrorReport err =
          compute_errors(sim.grid(), sim.layout(), result.snapshots[k].second, ref);
      const std::string suffix = "_" + std::to_string(k);
      add("err_eta_l2" + suffix, fmt17(err.eta_l2));
      add("err_eta_linf" + suffix, fmt17(err.eta_linf));
      add("err_u_l2" + suffix, fmt17(err.u_l2));
      add("err_u_linf" + suffix, fmt17(err.u_linf));
      add("err_b_l2" + suffix, fmt17(err.bed_l2));
      add("err_b_linf" + suffix, fmt17(err.bed_linf));
      if (k + 1 == result.snapshots.size()) {
        add("err_eta_l2", fmt17(err.eta_l2));
        add("err_eta_linf", fmt17(err.eta_linf));
        add("err_u_l2", fmt17(err.u_l2));
        add("err_u_linf", fmt17(err.u_linf));
        add("err_b_l2", fmt17(err.bed_l2));
        add("err_b_linf", fmt17(err.bed_linf));
      }
    }
  }

  if (!run_cfg.out_dir.empty()) {
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
      const std::string base = run_cfg.out_dir + "/" + snapshot_name(static_cast<int>(k), "csv");
      write_snapshot_csv(base, sim.grid(), sim.layout(), result.snapshots[k].second);
      write_state_file(run_cfg.out_dir + "/" + snapshot_name(static_cast<int>(k), "state"),
                       result.snapshots[k].second);
    }
    std::ofstream metrics(run_cfg.out_dir + "/metrics.txt");
    if (!metrics) throw ConfigError("cannot write metrics file");
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
      metrics << "snapshot_" << k << "_time=" << fmt17(result.snapshots[k].first) << "\n";
    }
    for (const auto& [key, value] : result.metrics) {
      metrics << key << "=" << value << "\n";
    }
  }
  return result;
}

}  // namespace mlswe
