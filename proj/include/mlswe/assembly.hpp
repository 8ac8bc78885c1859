#pragma once

#include <optional>
#include <span>

#include "mlswe/grid.hpp"
#include "mlswe/layers.hpp"
#include "mlswe/operators.hpp"
#include "mlswe/physics.hpp"
#include "mlswe/state.hpp"
#include "mlswe/tridiag.hpp"

namespace mlswe {

/// Closure coefficients frozen at time level n, one bundle per step.
struct FrozenClosures {
  std::vector<double> nu;        ///< interface viscosities, layout.interface_values()
  std::vector<double> cf_absu1;  ///< C_f^n |u_1^n| per edge
  std::vector<double> cw_tilde;  ///< linearized wind coefficient per edge
};

/// Evaluate the turbulence/friction closures from the time-n state.
void compute_frozen_closures(const LayerLayout& layout, const PhysicsParams& physics,
                             const EdgeFields& edges, std::span<const double> u_flat,
                             FrozenClosures& out);

/// Vertical momentum matrix of one edge column, rescaled by l_a h. Rows carry
/// the implicit viscous coupling; the bottom row adds the frozen friction term
/// and the top row the linearized wind drag. `w` is the implicit weight
/// (theta dt for the theta-method, a_ll dt for an IMEX stage).
void assemble_vertical_matrix(const LayerScheme& scheme, double h_edge, double w,
                              std::span<const double> nu, double cf_absu1,
                              double cw_tilde, std::span<double> lower,
                              std::span<double> diag, std::span<double> upper);

/// Convenience form returning a TridiagonalSystem with zero rhs.
TridiagonalSystem assemble_vertical_matrix(const State& state, const Grid1D& grid,
                                           const LayerLayout& layout,
                                           const PhysicsParams& physics,
                                           const BoundaryConditions& bc, int e,
                                           double w);

/// Free-surface tridiagonal system over the cells.
///   Dx_i eta_i - g w^2 [ (H^T A^-1 H) deta/dx ]_i = rhs_cells_i - w d(H^T A^-1 F)_i
/// hta_h / hta_f hold the per-edge solved products (zero at boundary edges,
/// whose known new-time fluxes must already be folded into rhs_cells).
/// Prescribed-surface rows are replaced by Dirichlet values with symmetric
/// elimination of the neighbour coupling.
void assemble_free_surface_system(const Grid1D& grid, double w, double g,
                                  std::span<const double> hta_h,
                                  std::span<const double> hta_f,
                                  std::span<const double> rhs_cells,
                                  std::optional<double> eta_left,
                                  std::optional<double> eta_right,
                                  TridiagonalSystem& out);

}  // namespace mlswe
