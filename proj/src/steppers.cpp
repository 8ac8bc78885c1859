#include "mlswe/steppers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "mlswe/errors.hpp"
#include "mlswe/morphodynamics.hpp"
#include "mlswe/tracer.hpp"

namespace mlswe {

namespace {

bool is_boundary(const Grid1D& grid, int e) { return e == 0 || e == grid.cells; }

/// Edges whose momentum columns are solved: interior edges plus the outermost
/// edge of a prescribed-surface side (its column sees a flat surface across
/// the boundary, so it carries no implicit eta coupling).
bool solved_edge(const Grid1D& grid, const BoundaryConditions& bc, int e) {
  if (!is_boundary(grid, e)) return true;
  return bc.side(e).kind == BoundaryKind::Surface;
}

void refresh_velocity_fields(const LayerLayout& layout, std::span<const double> u,
                             EdgeFields& edges) {
  for (int e = 0; e < layout.edges(); ++e) {
    const LayerScheme& s = layout.edge_scheme(e);
    const int off = layout.edge_offset(e);
    double ubar = 0.0;
    for (int a = 0; a < s.count; ++a) ubar += s.fractions[a] * u[off + a];
    edges.ubar[e] = ubar;
    edges.flux[e] = edges.h[e] * ubar;
  }
}

/// F: advection plus mass-transfer forcing, per edge layer.
void explicit_terms(const Grid1D& grid, const LayerLayout& layout,
                    const BoundaryConditions& bc, const EdgeFields& edges,
                    std::span<const double> u, std::vector<double>& transfer_buf,
                    std::span<double> out) {
  for (int e = 0; e < layout.edges(); ++e) {
    const LayerScheme& s = layout.edge_scheme(e);
    const int off = layout.edge_offset(e);
    if (!solved_edge(grid, bc, e)) {
      for (int a = 0; a < s.count; ++a) out[off + a] = 0.0;
      continue;
    }
    const int n = s.count;
    double* transfer = transfer_buf.data();
    if (!is_boundary(grid, e)) {
      mass_transfer_edge(grid, layout, u, edges, e, {transfer, static_cast<std::size_t>(n - 1)});
    } else {
      std::fill_n(transfer, std::max(n - 1, 0), 0.0);
    }
    const double inv = 1.0 / (grid.dx_edge[e] * edges.h[e]);
    for (int a = 0; a < n; ++a) {
      double forcing = 0.0;
      if (a + 1 < n) {
        forcing += 0.5 * (u[off + a + 1] - u[off + a]) * transfer[a];
      }
      if (a > 0) {
        forcing += 0.5 * (u[off + a] - u[off + a - 1]) * transfer[a - 1];
      }
      out[off + a] = advection_term(grid, layout, u, e, a) +
                     forcing * inv / s.fractions[a];
    }
  }
}

/// I: free-surface gradient, vertical viscosity, friction and wind drag, per
/// edge layer. Prescribed-surface boundary edges see a zero surface gradient.
void stiff_terms(const Grid1D& grid, const LayerLayout& layout,
                 const PhysicsParams& physics, const BoundaryConditions& bc,
                 const EdgeFields& edges, const FrozenClosures& closures,
                 std::span<const double> u, std::span<const double> eta,
                 std::span<double> out) {
  for (int e = 0; e < layout.edges(); ++e) {
    const LayerScheme& s = layout.edge_scheme(e);
    const int off = layout.edge_offset(e);
    if (!solved_edge(grid, bc, e)) {
      for (int a = 0; a < s.count; ++a) out[off + a] = 0.0;
      continue;
    }
    const int n = s.count;
    const int ioff = layout.interface_offset(e);
    const double h = edges.h[e];
    double grad = 0.0;
    if (!is_boundary(grid, e)) {
      grad = physics.g * (eta[e] - eta[e - 1]) / grid.dx_edge[e];
    }
    for (int a = 0; a < n; ++a) {
      double flux_above;
      if (a + 1 < n) {
        flux_above = closures.nu[ioff + a] * (u[off + a + 1] - u[off + a]) /
                     (s.half_fraction[a] * h);
      } else {
        flux_above = closures.cw_tilde[e] * (physics.u_wind - u[off + a]);
      }
      double flux_below;
      if (a > 0) {
        flux_below = closures.nu[ioff + a - 1] * (u[off + a] - u[off + a - 1]) /
                     (s.half_fraction[a - 1] * h);
      } else {
        flux_below = closures.cf_absu1[e] * u[off + a];
      }
      out[off + a] = -grad + (flux_above - flux_below) / (s.fractions[a] * h);
    }
  }
}

/// New-time-level flux through a boundary edge when it is known a priori.
std::optional<double> known_boundary_flux(const BoundarySpec& spec, double t) {
  switch (spec.kind) {
    case BoundaryKind::Wall:
      return 0.0;
    case BoundaryKind::Discharge:
      return spec.discharge(t);
    case BoundaryKind::Surface:
      return std::nullopt;  // cell row is replaced, flux never enters the system
  }
  return 0.0;
}

void set_boundary_velocities(const LayerLayout& layout, const BoundaryConditions& bc,
                             double t, std::span<const double> h_edge,
                             std::span<double> u_flat) {
  const int last = layout.edges() - 1;
  for (int e : {0, last}) {
    const BoundarySpec& spec = e == 0 ? bc.left : bc.right;
    const LayerScheme& s = layout.edge_scheme(e);
    const int off = layout.edge_offset(e);
    switch (spec.kind) {
      case BoundaryKind::Wall:
        for (int a = 0; a < s.count; ++a) u_flat[off + a] = 0.0;
        break;
      case BoundaryKind::Discharge: {
        const double mean = spec.discharge(t) / h_edge[e];
        for (int a = 0; a < s.count; ++a) {
          u_flat[off + a] = (spec.profile.empty() ? 1.0 : spec.profile[a]) * mean;
        }
        break;
      }
      case BoundaryKind::Surface:
        break;
    }
  }
}

/// Solve one implicit stage: vertical columns, the free-surface tridiagonal
/// system and the velocity back-substitution. Expects ws.rhs_f and ws.rhs_cell
/// prepared (including known new-time boundary fluxes); fills ws.eta_new and
/// ws.u_new. Returns the free-surface residual.
double solve_implicit_stage(const Grid1D& grid, const LayerLayout& layout,
                            const PhysicsParams& physics, const BoundaryConditions& bc,
                            double w, double t_new, StepWorkspace& ws) {
  const int m = grid.cells;
  std::fill(ws.hta_h.begin(), ws.hta_h.end(), 0.0);
  std::fill(ws.hta_f.begin(), ws.hta_f.end(), 0.0);

  for (int e = 0; e <= m; ++e) {
    if (!solved_edge(grid, bc, e)) continue;
    const LayerScheme& s = layout.edge_scheme(e);
    const int n = s.count;
    const int off = layout.edge_offset(e);
    const int ioff = layout.interface_offset(e);
    const double h = ws.edges.h[e];

    std::span<double> lower(ws.col_a.data(), n);
    std::span<double> diag(ws.col_b.data(), n);
    std::span<double> upper(ws.col_c.data(), n);
    std::span<double> scratch(ws.col_scratch.data(), n);
    assemble_vertical_matrix(
        s, h, w, std::span<const double>(ws.closures.nu).subspan(ioff, n - 1),
        ws.closures.cf_absu1[e], ws.closures.cw_tilde[e], lower, diag, upper);

    thomas_solve(lower, diag, upper,
                 std::span<const double>(ws.rhs_f).subspan(off, n),
                 std::span<double>(ws.ainv_f).subspan(off, n), scratch);

    if (!is_boundary(grid, e)) {
      std::span<double> hcol(ws.col_x.data(), n);
      for (int a = 0; a < n; ++a) hcol[a] = s.fractions[a] * h;
      thomas_solve(lower, diag, upper, hcol,
                   std::span<double>(ws.ainv_h).subspan(off, n), scratch);
      double hth = 0.0;
      double htf = 0.0;
      for (int a = 0; a < n; ++a) {
        hth += hcol[a] * ws.ainv_h[off + a];
        htf += hcol[a] * ws.ainv_f[off + a];
      }
      ws.hta_h[e] = hth;
      ws.hta_f[e] = htf;
    }
  }

  std::optional<double> eta_left, eta_right;
  if (bc.left.kind == BoundaryKind::Surface) eta_left = bc.left.surface(t_new);
  if (bc.right.kind == BoundaryKind::Surface) eta_right = bc.right.surface(t_new);
  assemble_free_surface_system(grid, w, physics.g, ws.hta_h, ws.hta_f, ws.rhs_cell,
                               eta_left, eta_right, ws.fs);
  thomas_solve(ws.fs.lower, ws.fs.diag, ws.fs.upper, ws.fs.rhs, ws.eta_new,
               ws.rhs_cell /* reuse as scratch */);
  const double residual = tridiagonal_residual(ws.fs, ws.eta_new);

  for (int e = 0; e <= m; ++e) {
    const LayerScheme& s = layout.edge_scheme(e);
    const int off = layout.edge_offset(e);
    if (!solved_edge(grid, bc, e)) {
      for (int a = 0; a < s.count; ++a) ws.u_new[off + a] = 0.0;
      continue;
    }
    double coef = 0.0;
    if (!is_boundary(grid, e)) {
      coef = physics.g * w * (ws.eta_new[e] - ws.eta_new[e - 1]) / grid.dx_edge[e];
    }
    for (int a = 0; a < s.count; ++a) {
      ws.u_new[off + a] = ws.ainv_f[off + a] - coef * ws.ainv_h[off + a];
    }
  }
  set_boundary_velocities(layout, bc, t_new, ws.edges.h, ws.u_new);
  return residual;
}

void compute_center_transfers(const Grid1D& grid, const LayerLayout& layout,
                              std::span<const double> u, const EdgeFields& edges,
                              std::span<double> out) {
  for (int i = 0; i < grid.cells; ++i) {
    const int n = layout.cell_count(i);
    const int goff = layout.cell_offset(i) - i;  // cells have count-1 interfaces
    mass_transfer_center(grid, layout, u, edges, i,
                         out.subspan(goff, static_cast<std::size_t>(n - 1)));
  }
}

void bottom_velocities(const LayerLayout& layout, std::span<const double> u,
                       std::span<double> u1) {
  for (int e = 0; e < layout.edges(); ++e) u1[e] = u[layout.edge_offset(e)];
}

void resize_workspace(const Grid1D& grid, const LayerLayout& layout, StepWorkspace& ws) {
  const int m = grid.cells;
  const int ev = layout.edge_values();
  ws.edges.resize(m + 1);
  ws.expl.assign(ev, 0.0);
  ws.stiff.assign(ev, 0.0);
  ws.rhs_f.assign(ev, 0.0);
  ws.ainv_h.assign(ev, 0.0);
  ws.ainv_f.assign(ev, 0.0);
  ws.hta_h.assign(m + 1, 0.0);
  ws.hta_f.assign(m + 1, 0.0);
  ws.rhs_cell.assign(m, 0.0);
  ws.eta_new.assign(m, 0.0);
  ws.u_new.assign(ev, 0.0);
  ws.transfer.assign(std::max(layout.max_edge_count() - 1, 1), 0.0);
  ws.g_center.assign(layout.cell_values() - m, 0.0);
  ws.rho_new.assign(layout.cell_values(), 0.0);
  ws.u1_old.assign(m + 1, 0.0);
  ws.u1_new.assign(m + 1, 0.0);
  const int nmax = layout.max_edge_count();
  ws.col_a.assign(nmax, 0.0);
  ws.col_b.assign(nmax, 0.0);
  ws.col_c.assign(nmax, 0.0);
  ws.col_x.assign(nmax, 0.0);
  ws.col_scratch.assign(nmax, 0.0);
  ws.fs.resize(m);
}

}  // namespace

std::pair<double, double> courant_numbers(const Grid1D& grid, const LayerLayout& layout,
                                          const State& state, double g, double dt) {
  double c_vel = 0.0;
  double c_cel = 0.0;
  for (int i = 0; i < grid.cells; ++i) {
    const int e = i + 1;
    const int off = layout.edge_offset(e);
    double vmax = 0.0;
    for (int a = 0; a < layout.edge_count(e); ++a) {
      vmax = std::max(vmax, std::abs(state.u[off + a]));
    }
    const double ratio = dt / grid.dx[i];
    const double celerity = std::sqrt(g * std::max(state.depth(i), 0.0));
    c_vel = std::max(c_vel, vmax * ratio);
    c_cel = std::max(c_cel, (vmax + celerity) * ratio);
  }
  return {c_vel, c_cel};
}

ThetaStepper::ThetaStepper(const Grid1D& grid, const LayerLayout& layout,
                           const PhysicsParams& physics, BoundaryConditions bc,
                           double theta, StepperOptions options)
    : grid_(grid), layout_(layout), physics_(physics), bc_(std::move(bc)),
      theta_(theta), options_(options) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw ConfigError("theta must lie in [0, 1]");
  }
  resize_workspace(grid_, layout_, ws_);
}

StepReport ThetaStepper::step(State& state, double dt) {
  const int m = grid_.cells;
  const double t0 = state.time;
  const double t1 = t0 + dt;
  const double w = theta_ * dt;
  StepWorkspace& ws = ws_;

  compute_edge_fields(grid_, layout_, bc_, state, t0, physics_.h_min, ws.edges);
  auto [c_vel, c_cel] = courant_numbers(grid_, layout_, state, physics_.g, dt);
  compute_frozen_closures(layout_, physics_, ws.edges, state.u, ws.closures);
  explicit_terms(grid_, layout_, bc_, ws.edges, state.u, ws.transfer, ws.expl);
  stiff_terms(grid_, layout_, physics_, bc_, ws.edges, ws.closures, state.u, state.eta,
              ws.stiff);

  for (int e = 0; e <= m; ++e) {
    if (!solved_edge(grid_, bc_, e)) continue;
    const LayerScheme& s = layout_.edge_scheme(e);
    const int off = layout_.edge_offset(e);
    const double h = ws.edges.h[e];
    const int n = s.count;
    for (int a = 0; a < n; ++a) {
      const double val = state.u[off + a] + dt * ws.expl[off + a] +
                         (1.0 - theta_) * dt * ws.stiff[off + a];
      ws.rhs_f[off + a] = s.fractions[a] * h * val;
    }
    ws.rhs_f[off + n - 1] += w * ws.closures.cw_tilde[e] * physics_.u_wind;
  }

  for (int i = 0; i < m; ++i) {
    ws.rhs_cell[i] = grid_.dx[i] * state.eta[i] -
                     (1.0 - theta_) * dt * (ws.edges.flux[i + 1] - ws.edges.flux[i]);
  }
  if (auto f = known_boundary_flux(bc_.left, t1)) ws.rhs_cell[0] += w * *f;
  if (auto f = known_boundary_flux(bc_.right, t1)) ws.rhs_cell[m - 1] -= w * *f;

  const double residual =
      solve_implicit_stage(grid_, layout_, physics_, bc_, w, t1, ws);

  if (options_.tracer) {
    tracer_step_theta(grid_, layout_, state, ws.edges, ws.u_new, theta_, dt,
                      ws.rho_new);
  }
  if (options_.morphodynamics) {
    bottom_velocities(layout_, state.u, ws.u1_old);
    bottom_velocities(layout_, ws.u_new, ws.u1_new);
    exner_step_theta(grid_, ws.u1_old, ws.u1_new, dt, theta_, physics_.xi(),
                     physics_.grass_ag, state.bed);
  }

  state.eta = ws.eta_new;
  state.u = ws.u_new;
  if (options_.tracer) state.rho = ws.rho_new;
  state.time = t1;

  StepReport report;
  report.dt = dt;
  report.c_vel = c_vel;
  report.c_cel = c_cel;
  report.fs_residual = residual;
  return report;
}

ImexArk2Stepper::ImexArk2Stepper(const Grid1D& grid, const LayerLayout& layout,
                                 const PhysicsParams& physics, BoundaryConditions bc,
                                 StepperOptions options)
    : grid_(grid), layout_(layout), physics_(physics), bc_(std::move(bc)),
      options_(options), tableaux_(ark2_tableaux()) {
  resize_workspace(grid_, layout_, ws_);
  const int ev = layout.edge_values();
  const int gv = layout.cell_values() - grid.cells;
  for (int j = 0; j < 3; ++j) {
    u_stage_[j].assign(ev, 0.0);
    eta_stage_[j].assign(grid.cells, 0.0);
    f_stage_[j].assign(ev, 0.0);
    i_stage_[j].assign(ev, 0.0);
    flux_stage_[j].assign(grid.cells + 1, 0.0);
    g_stage_[j].assign(gv, 0.0);
    rho_stage_[j].assign(layout.cell_values(), 0.0);
    u1_stage_[j].assign(grid.cells + 1, 0.0);
  }
}

StepReport ImexArk2Stepper::step(State& state, double dt) {
  const int m = grid_.cells;
  const double t0 = state.time;
  const ButcherTableaux& tab = tableaux_;
  StepWorkspace& ws = ws_;

  compute_edge_fields(grid_, layout_, bc_, state, t0, physics_.h_min, ws.edges);
  auto [c_vel, c_cel] = courant_numbers(grid_, layout_, state, physics_.g, dt);
  compute_frozen_closures(layout_, physics_, ws.edges, state.u, ws.closures);

  u_stage_[0] = state.u;
  eta_stage_[0] = state.eta;
  std::copy(ws.edges.flux.begin(), ws.edges.flux.end(), flux_stage_[0].begin());
  explicit_terms(grid_, layout_, bc_, ws.edges, state.u, ws.transfer, f_stage_[0]);
  stiff_terms(grid_, layout_, physics_, bc_, ws.edges, ws.closures, state.u, state.eta,
              i_stage_[0]);
  if (options_.tracer) {
    compute_center_transfers(grid_, layout_, state.u, ws.edges, g_stage_[0]);
    rho_stage_[0] = state.rho;
  }

  double residual = 0.0;
  for (int j = 1; j < 3; ++j) {
    const double w = tab.a_implicit[j][j] * dt;
    const double t_stage = t0 + tab.c[j] * dt;

    for (int e = 0; e <= m; ++e) {
      if (!solved_edge(grid_, bc_, e)) continue;
      const LayerScheme& s = layout_.edge_scheme(e);
      const int off = layout_.edge_offset(e);
      const double h = ws.edges.h[e];
      const int n = s.count;
      for (int a = 0; a < n; ++a) {
        double val = state.u[off + a];
        for (int k = 0; k < j; ++k) {
          val += dt * (tab.a_explicit[j][k] * f_stage_[k][off + a] +
                       tab.a_implicit[j][k] * i_stage_[k][off + a]);
        }
        ws.rhs_f[off + a] = s.fractions[a] * h * val;
      }
      ws.rhs_f[off + n - 1] += w * ws.closures.cw_tilde[e] * physics_.u_wind;
    }

    for (int i = 0; i < m; ++i) {
      double rhs = grid_.dx[i] * state.eta[i];
      for (int k = 0; k < j; ++k) {
        rhs -= tab.a_implicit[j][k] * dt *
               (flux_stage_[k][i + 1] - flux_stage_[k][i]);
      }
      ws.rhs_cell[i] = rhs;
    }
    if (auto f = known_boundary_flux(bc_.left, t_stage)) ws.rhs_cell[0] += w * *f;
    if (auto f = known_boundary_flux(bc_.right, t_stage)) ws.rhs_cell[m - 1] -= w * *f;

    residual = std::max(
        residual, solve_implicit_stage(grid_, layout_, physics_, bc_, w, t_stage, ws));

    u_stage_[j] = ws.u_new;
    eta_stage_[j] = ws.eta_new;

    // Recover I at this stage from the stage relation; exact by construction
    // and cheaper than re-evaluating the operator.
    const double inv_w = 1.0 / tab.a_implicit[j][j];
    for (int e = 0; e <= m; ++e) {
      const LayerScheme& s = layout_.edge_scheme(e);
      const int off = layout_.edge_offset(e);
      if (!solved_edge(grid_, bc_, e)) {
        for (int a = 0; a < s.count; ++a) i_stage_[j][off + a] = 0.0;
        continue;
      }
      for (int a = 0; a < s.count; ++a) {
        double acc = (u_stage_[j][off + a] - state.u[off + a]) / dt;
        for (int k = 0; k < j; ++k) {
          acc -= tab.a_explicit[j][k] * f_stage_[k][off + a] +
                 tab.a_implicit[j][k] * i_stage_[k][off + a];
        }
        i_stage_[j][off + a] = acc * inv_w;
      }
    }

    refresh_velocity_fields(layout_, u_stage_[j], ws.edges);
    std::copy(ws.edges.flux.begin(), ws.edges.flux.end(), flux_stage_[j].begin());
    explicit_terms(grid_, layout_, bc_, ws.edges, u_stage_[j], ws.transfer, f_stage_[j]);
    if (options_.tracer) {
      compute_center_transfers(grid_, layout_, u_stage_[j], ws.edges, g_stage_[j]);
    }
  }

  // Final assembly with the shared weights b.
  for (int e = 0; e <= m; ++e) {
    const int off = layout_.edge_offset(e);
    const int n = layout_.edge_count(e);
    if (!solved_edge(grid_, bc_, e)) continue;
    for (int a = 0; a < n; ++a) {
      double du = 0.0;
      for (int j = 0; j < 3; ++j) {
        du += tab.b[j] * (f_stage_[j][off + a] + i_stage_[j][off + a]);
      }
      ws.u_new[off + a] = state.u[off + a] + dt * du;
    }
  }
  set_boundary_velocities(layout_, bc_, t0 + dt, ws.edges.h, ws.u_new);
  for (int i = 0; i < m; ++i) {
    double div = 0.0;
    for (int j = 0; j < 3; ++j) {
      div += tab.b[j] * (flux_stage_[j][i + 1] - flux_stage_[j][i]);
    }
    ws.eta_new[i] = state.eta[i] - dt / grid_.dx[i] * div;
  }
  if (bc_.left.kind == BoundaryKind::Surface) ws.eta_new[0] = bc_.left.surface(t0 + dt);
  if (bc_.right.kind == BoundaryKind::Surface) {
    ws.eta_new[m - 1] = bc_.right.surface(t0 + dt);
  }

  if (options_.tracer) {
    // Stage tracer values, then the b-weighted conservative assembly. Each
    // update divides by the layer mass implied by its own fluxes so a uniform
    // tracer stays an exact fixed point.
    std::vector<double> u_flux2(layout_.edge_values());
    std::vector<double> u_flux3(layout_.edge_values());
    for (int k = 0; k < layout_.edge_values(); ++k) {
      u_flux2[k] = tab.a_implicit[1][1] * u_stage_[1][k] +
                   tab.a_implicit[1][0] * u_stage_[0][k];
      u_flux3[k] = tab.a_implicit[2][1] * u_stage_[2][k] +
                   tab.a_implicit[2][0] * u_stage_[1][k];
    }
    TracerUpdate upd;
    upd.begin(grid_, layout_, state);
    upd.add_pass(grid_, layout_, ws.edges.h, u_flux2, rho_stage_[0], g_stage_[0],
                 tab.a_explicit[1][0] * dt);
    upd.finish(grid_, layout_, rho_stage_[1]);
    upd.add_pass(grid_, layout_, ws.edges.h, u_flux3, rho_stage_[1], g_stage_[1],
                 tab.a_explicit[2][1] * dt);
    upd.add_pass(grid_, layout_, ws.edges.h, u_flux2, rho_stage_[0], g_stage_[0],
                 tab.a_explicit[2][0] * dt);
    upd.finish(grid_, layout_, rho_stage_[2]);

    TracerUpdate fin;
    fin.begin(grid_, layout_, state);
    for (int j = 0; j < 3; ++j) {
      fin.add_pass(grid_, layout_, ws.edges.h, u_stage_[j], rho_stage_[j], g_stage_[j],
                   tab.b[j] * dt);
    }
    fin.finish(grid_, layout_, ws.rho_new);
  }

  if (options_.morphodynamics) {
    for (int j = 0; j < 3; ++j) {
      bottom_velocities(layout_, u_stage_[j], u1_stage_[j]);
    }
    exner_step_imex(grid_,
                    {std::span<const double>(u1_stage_[0]),
                     std::span<const double>(u1_stage_[1]),
                     std::span<const double>(u1_stage_[2])},
                    tab.b, dt, physics_.xi(), physics_.grass_ag, state.bed);
  }

  state.eta = ws.eta_new;
  state.u = ws.u_new;
  if (options_.tracer) state.rho = ws.rho_new;
  state.time = t0 + dt;

  StepReport report;
  report.dt = dt;
  report.c_vel = c_vel;
  report.c_cel = c_cel;
  report.fs_residual = residual;
  return report;
}

Rk3Stepper::Rk3Stepper(const Grid1D& grid, const LayerLayout& layout,
                       const PhysicsParams& physics, BoundaryConditions bc,
                       double target_c_cel, StepperOptions options)
    : grid_(grid), layout_(layout), physics_(physics), bc_(std::move(bc)),
      target_(target_c_cel), options_(options) {
  if (!(target_c_cel > 0.0 && target_c_cel <= 1.0)) {
    throw ConfigError("explicit Courant target must lie in (0, 1]");
  }
  resize_workspace(grid_, layout_, ws_);
  const auto init = [&](RkVector& v) {
    v.eta.assign(grid.cells, 0.0);
    v.u.assign(layout.edge_values(), 0.0);
    v.q.assign(layout.cell_values(), 0.0);
    v.bed.assign(grid.cells, 0.0);
  };
  init(y0_);
  init(k_);
  q0_.assign(layout.cell_values(), 0.0);
}

void Rk3Stepper::derivative(const State& s, double t, RkVector& out) {
  StepWorkspace& ws = ws_;
  compute_edge_fields(grid_, layout_, bc_, s, t, physics_.h_min, ws.edges);
  compute_frozen_closures(layout_, physics_, ws.edges, s.u, ws.closures);
  explicit_terms(grid_, layout_, bc_, ws.edges, s.u, ws.transfer, ws.expl);
  stiff_terms(grid_, layout_, physics_, bc_, ws.edges, ws.closures, s.u, s.eta,
              ws.stiff);

  for (int i = 0; i < grid_.cells; ++i) {
    out.eta[i] = -(ws.edges.flux[i + 1] - ws.edges.flux[i]) / grid_.dx[i];
  }
  for (int e = 0; e <= grid_.cells; ++e) {
    const int off = layout_.edge_offset(e);
    const int n = layout_.edge_count(e);
    const bool solved = solved_edge(grid_, bc_, e);
    for (int a = 0; a < n; ++a) {
      out.u[off + a] = solved ? ws.expl[off + a] + ws.stiff[off + a] : 0.0;
    }
  }
  if (options_.tracer) {
    compute_center_transfers(grid_, layout_, s.u, ws.edges, ws.g_center);
    TracerUpdate upd;
    upd.begin(grid_, layout_, s);
    std::fill(upd.numerator.begin(), upd.numerator.end(), 0.0);
    std::fill(upd.mass.begin(), upd.mass.end(), 0.0);
    upd.add_pass(grid_, layout_, ws.edges.h, s.u, s.rho, ws.g_center, 1.0);
    for (int i = 0; i < grid_.cells; ++i) {
      const int off = layout_.cell_offset(i);
      for (int a = 0; a < layout_.cell_count(i); ++a) {
        out.q[off + a] = upd.numerator[off + a] / grid_.dx[i];
      }
    }
  }
  if (options_.morphodynamics) {
    bottom_velocities(layout_, s.u, ws.u1_old);
    const double xi = physics_.xi();
    for (int i = 0; i < grid_.cells; ++i) {
      out.bed[i] = -xi / grid_.dx[i] *
                   (grass_flux(ws.u1_old[i + 1], physics_.grass_ag) -
                    grass_flux(ws.u1_old[i], physics_.grass_ag));
    }
  }
}

void Rk3Stepper::enforce_bc(State& s, double t) {
  apply_boundary_surface(grid_, bc_, t, s);
  const int last = grid_.cells;
  for (int e : {0, last}) {
    const BoundarySpec& spec = e == 0 ? bc_.left : bc_.right;
    const LayerScheme& scheme = layout_.edge_scheme(e);
    const int off = layout_.edge_offset(e);
    switch (spec.kind) {
      case BoundaryKind::Wall:
        for (int a = 0; a < scheme.count; ++a) s.u[off + a] = 0.0;
        break;
      case BoundaryKind::Discharge: {
        const double h = s.depth(e == 0 ? 0 : grid_.cells - 1);
        const double mean = spec.discharge(t) / h;
        for (int a = 0; a < scheme.count; ++a) {
          s.u[off + a] = (spec.profile.empty() ? 1.0 : spec.profile[a]) * mean;
        }
        break;
      }
      case BoundaryKind::Surface:
        break;
    }
  }
}

StepReport Rk3Stepper::step(State& state, double dt_cap) {
  const int m = grid_.cells;
  const double t0 = state.time;

  double dt = dt_cap;
  for (int i = 0; i < m; ++i) {
    double vmax = 0.0;
    for (int e : {i, i + 1}) {
      const int off = layout_.edge_offset(e);
      for (int a = 0; a < layout_.edge_count(e); ++a) {
        vmax = std::max(vmax, std::abs(state.u[off + a]));
      }
    }
    const double speed = vmax + std::sqrt(physics_.g * std::max(state.depth(i), 0.0));
    if (speed > 0.0) dt = std::min(dt, target_ * grid_.dx[i] / speed);
  }
  if (!(dt > 0.0)) throw SolverError("explicit time step collapsed to zero");

  auto [c_vel, c_cel] = courant_numbers(grid_, layout_, state, physics_.g, dt);

  y0_.eta = state.eta;
  y0_.u = state.u;
  y0_.bed = state.bed;
  if (options_.tracer) {
    for (int i = 0; i < m; ++i) {
      const LayerScheme& s = layout_.cell_scheme(i);
      const int off = layout_.cell_offset(i);
      for (int a = 0; a < s.count; ++a) {
        y0_.q[off + a] = s.fractions[a] * state.depth(i) * state.rho[off + a];
      }
    }
  }

  State& stage = stage_;
  stage = state;

  auto materialize = [&](double c0, const RkVector& base, double c1, double cdt,
                         double t_stage) {
    // stage <- c0 * y0 + c1 * stage + cdt * k, then boundary enforcement.
    for (int i = 0; i < m; ++i) {
      stage.eta[i] = c0 * base.eta[i] + c1 * stage.eta[i] + cdt * k_.eta[i];
      stage.bed[i] = options_.morphodynamics
                         ? c0 * base.bed[i] + c1 * stage.bed[i] + cdt * k_.bed[i]
                         : base.bed[i];
    }
    for (int v = 0; v < layout_.edge_values(); ++v) {
      stage.u[v] = c0 * base.u[v] + c1 * stage.u[v] + cdt * k_.u[v];
    }
    stage.time = t_stage;
    enforce_bc(stage, t_stage);
    if (options_.tracer) {
      for (int v = 0; v < layout_.cell_values(); ++v) {
        q0_[v] = c0 * base.q[v] + c1 * q0_[v] + cdt * k_.q[v];
      }
      for (int i = 0; i < m; ++i) {
        const LayerScheme& s = layout_.cell_scheme(i);
        const int off = layout_.cell_offset(i);
        const double h = stage.depth(i);
        for (int a = 0; a < s.count; ++a) {
          stage.rho[off + a] = q0_[off + a] / (s.fractions[a] * h);
        }
      }
    }
  };

  // Shu-Osher SSP(3,3).
  derivative(state, t0, k_);
  std::fill(q0_.begin(), q0_.end(), 0.0);
  materialize(1.0, y0_, 0.0, dt, t0 + dt);
  derivative(stage, t0 + dt, k_);
  materialize(0.75, y0_, 0.25, 0.25 * dt, t0 + 0.5 * dt);
  derivative(stage, t0 + 0.5 * dt, k_);
  materialize(1.0 / 3.0, y0_, 2.0 / 3.0, 2.0 / 3.0 * dt, t0 + dt);

  state = stage;
  state.time = t0 + dt;

  StepReport report;
  report.dt = dt;
  report.c_vel = c_vel;
  report.c_cel = c_cel;
  report.fs_residual = 0.0;
  return report;
}

}  // namespace mlswe
