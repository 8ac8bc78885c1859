#pragma once

#include <span>
#include <vector>

#include "mlswe/grid.hpp"
#include "mlswe/layers.hpp"
#include "mlswe/operators.hpp"
#include "mlswe/state.hpp"

namespace mlswe {

/// Upwinded interface tracer value driven by the sign of the mass transfer.
double interface_tracer_value(double rho_lo, double rho_hi, double g);

/// Accumulator for the conservative tracer update. `numerator` carries the
/// evolving layer tracer mass Dx l h rho, `mass` the same update applied to
/// rho == 1. Dividing the two keeps a uniform tracer an exact fixed point of
/// every scheme (consistency with the discrete continuity equation).
struct TracerUpdate {
  std::vector<double> numerator;  ///< per cell-layer
  std::vector<double> mass;       ///< per cell-layer

  void begin(const Grid1D& grid, const LayerLayout& layout, const State& state);

  /// Add one weighted flux pass: horizontal upwind fluxes with the given
  /// per-edge-layer flux velocities and frozen edge heights, plus vertical
  /// exchange with the given cell-centered transfer terms. `rho_flat` supplies
  /// the donor values, `weight` the dt-scaled coefficient.
  void add_pass(const Grid1D& grid, const LayerLayout& layout,
                std::span<const double> h_edge, std::span<const double> u_flux,
                std::span<const double> rho_flat, std::span<const double> g_center,
                double weight);

  /// rho = numerator / mass; throws SolverError when a layer mass vanishes.
  void finish(const Grid1D& grid, const LayerLayout& layout,
              std::span<double> rho_out) const;
};

/// Cell tracer value expressed in an edge scheme (aggregated when the cell
/// carries more layers than the edge).
double mapped_cell_value(const LayerLayout& layout, std::span<const double> flat,
                         int cell, int target_scheme, int layer);

/// Theta-method tracer step: horizontal fluxes and vertical transfer both
/// evaluated at the theta-weighted velocities u^{n+theta} (heights frozen).
void tracer_step_theta(const Grid1D& grid, const LayerLayout& layout,
                       const State& state_n, const EdgeFields& edges,
                       std::span<const double> u_new, double theta, double dt,
                       std::span<double> rho_out);

}  // namespace mlswe
