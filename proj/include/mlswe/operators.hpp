#pragma once

#include <span>
#include <vector>

#include "mlswe/grid.hpp"
#include "mlswe/layers.hpp"
#include "mlswe/state.hpp"

namespace mlswe {

/// Per-edge fields shared by every operator evaluation: upwinded total
/// heights, depth-averaged velocities and total mass fluxes H^T U.
struct EdgeFields {
  std::vector<double> h;     ///< h_{i+1/2}
  std::vector<double> ubar;  ///< sum_a l_a u_a
  std::vector<double> flux;  ///< h_{i+1/2} sum_a l_a u_a

  void resize(int edges) {
    h.assign(edges, 0.0);
    ubar.assign(edges, 0.0);
    flux.assign(edges, 0.0);
  }
};

/// Height of the control volume upwind of an interior edge; the mean of the
/// neighbours when the depth-averaged edge velocity vanishes.
double upwind_height(double h_left, double h_right, double ubar);

/// Fill EdgeFields from a state. Interior edges upwind between the adjacent
/// cells; wall and discharge edges use the inner cell, prescribed-surface
/// edges upwind against a ghost cell holding eta_bc(t). Throws DryingError
/// when any cell depth falls below h_min.
void compute_edge_fields(const Grid1D& grid, const LayerLayout& layout,
                         const BoundaryConditions& bc, const State& state, double t,
                         double h_min, EdgeFields& out);

/// Value of donor edge `de`'s column expressed in `target_scheme` at `layer`
/// (slow path: the donor lies across a layer transition).
double mapped_edge_value_across(const LayerLayout& layout,
                                std::span<const double> u_flat, int de,
                                int target_scheme, int layer);

/// Value of donor edge `de`'s column expressed in `target_scheme` at `layer`.
inline double mapped_edge_value(const LayerLayout& layout,
                                std::span<const double> u_flat, int de,
                                int target_scheme, int layer) {
  if (layout.edge_scheme_id(de) == target_scheme) {
    return u_flat[layout.edge_offset(de) + layer];
  }
  return mapped_edge_value_across(layout, u_flat, de, target_scheme, layer);
}

/// Mass transfer G_{a+1/2, i+1/2} at the interior interfaces of an interior
/// edge (out has edge_count(e)-1 entries, bottom to top). Each cell value of
/// the deviation flux h (u_b - ubar) is taken from the cell edge upwind of the
/// cell-averaged layer velocity.
void mass_transfer_edge(const Grid1D& grid, const LayerLayout& layout,
                        std::span<const double> u_flat, const EdgeFields& edges, int e,
                        std::span<double> out);

/// Cell-centered mass transfer G_{a+1/2, i} used by the tracer equation
/// (out has cell_count(i)-1 entries). At transition cells the coarse-side
/// per-layer fluxes are split over the mapped fine layers in proportion to
/// the fine fractions.
void mass_transfer_center(const Grid1D& grid, const LayerLayout& layout,
                          std::span<const double> u_flat, const EdgeFields& edges, int i,
                          std::span<double> out);

/// Momentum advection -u du/dx with a second order upstream slope,
/// degrading to first order (or zero) where the stencil leaves the domain.
/// Donor values cross layer transitions through fraction-weighted aggregation.
double advection_term(const Grid1D& grid, const LayerLayout& layout,
                      std::span<const double> u_flat, int e, int layer);

/// Vertical velocity recovered from the integrated incompressibility
/// condition, per interface of one cell column (w_minus seen from below,
/// w_plus from above; both spans sized cell_count(i)+1).
void recover_vertical_velocity(const Grid1D& grid, const LayerLayout& layout,
                               const State& state, int i, std::span<double> w_minus,
                               std::span<double> w_plus);

}  // namespace mlswe
