#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "mlswe/grid.hpp"
#include "mlswe/layers.hpp"

namespace mlswe {

/// Prognostic variables on the staggered grid. Velocities and tracer are
/// flattened ragged arrays addressed through the layout offsets; boundary
/// edge columns are stored too and always carry the boundary values.
struct State {
  std::vector<double> eta;  ///< free surface per cell, m
  std::vector<double> u;    ///< per-edge per-layer velocity, layout.edge_values()
  std::vector<double> rho;  ///< per-cell per-layer tracer, layout.cell_values()
  std::vector<double> bed;  ///< bed elevation per cell, m
  double time = 0.0;

  static State zeros(const Grid1D& grid, const LayerLayout& layout) {
    State s;
    s.eta.assign(grid.cells, 0.0);
    s.u.assign(layout.edge_values(), 0.0);
    s.rho.assign(layout.cell_values(), 1.0);
    s.bed.assign(grid.cells, 0.0);
    return s;
  }

  double depth(int i) const { return eta[i] - bed[i]; }

  std::span<double> u_col(const LayerLayout& layout, int e) {
    return {u.data() + layout.edge_offset(e), static_cast<std::size_t>(layout.edge_count(e))};
  }
  std::span<const double> u_col(const LayerLayout& layout, int e) const {
    return {u.data() + layout.edge_offset(e), static_cast<std::size_t>(layout.edge_count(e))};
  }
  std::span<double> rho_col(const LayerLayout& layout, int i) {
    return {rho.data() + layout.cell_offset(i), static_cast<std::size_t>(layout.cell_count(i))};
  }
  std::span<const double> rho_col(const LayerLayout& layout, int i) const {
    return {rho.data() + layout.cell_offset(i), static_cast<std::size_t>(layout.cell_count(i))};
  }
};

enum class BoundaryKind { Wall, Discharge, Surface };

/// One side of the domain: a closed wall, a prescribed total discharge
/// q(t) = q0 + q_amplitude sin(q_omega t) with an optional per-layer shape,
/// or a prescribed free surface eta(t) = eta0 + eta_amplitude sin(eta_omega t).
struct BoundarySpec {
  BoundaryKind kind = BoundaryKind::Wall;
  double q0 = 0.0;
  double q_amplitude = 0.0;
  double q_omega = 0.0;
  double eta0 = 0.0;
  double eta_amplitude = 0.0;
  double eta_omega = 0.0;
  /// Per-layer velocity shape s_a with sum_a l_a s_a = 1; the imposed edge
  /// velocities are u_a = s_a q(t)/h. Empty means uniform (s_a = 1).
  std::vector<double> profile;

  double discharge(double t) const { return q0 + q_amplitude * std::sin(q_omega * t); }
  double surface(double t) const { return eta0 + eta_amplitude * std::sin(eta_omega * t); }
};

struct BoundaryConditions {
  BoundarySpec left;
  BoundarySpec right;

  /// Spec of the boundary edge e (0 or the last edge index).
  const BoundarySpec& side(int e) const { return e == 0 ? left : right; }
};

/// Set the velocities of a prescribed boundary edge column for time t.
/// Wall: zero. Discharge: u_a = s_a q(t)/h_edge. Surface edges are left
/// untouched (their velocities evolve with the momentum equation).
void apply_boundary_velocities(const LayerLayout& layout, const BoundaryConditions& bc,
                               double t, std::span<const double> h_edge, State& state);

/// Prescribed-surface cells get eta(t); other boundaries leave eta alone.
void apply_boundary_surface(const Grid1D& grid, const BoundaryConditions& bc, double t,
                            State& state);

}  // namespace mlswe
