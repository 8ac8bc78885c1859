#pragma once

#include "mlswe/grid.hpp"
#include "mlswe/layers.hpp"
#include "mlswe/state.hpp"

namespace mlswe {

/// Relative errors against a reference solution on the same grid and layout.
/// Velocity errors are weighted by the cell size and the reference layer
/// heights; eta and bed use plain relative l2 / l_inf norms over the cells.
struct ErrorReport {
  double eta_l2 = 0.0;
  double eta_linf = 0.0;
  double u_l2 = 0.0;
  double u_linf = 0.0;
  double bed_l2 = 0.0;
  double bed_linf = 0.0;
};

ErrorReport compute_errors(const Grid1D& grid, const LayerLayout& layout,
                           const State& solution, const State& reference);

}  // namespace mlswe
