#pragma once

#include <vector>

namespace mlswe {

/// Staggered 1D mesh. Free-surface unknowns live at the M cell centers,
/// velocities at the M+1 edges. Edge e is the left face of cell e, so an
/// interior edge e (1 <= e <= M-1) separates cells e-1 and e.
struct Grid1D {
  double x_start = 0.0;
  double x_end = 0.0;
  int cells = 0;

  std::vector<double> x_center;  ///< size M
  std::vector<double> x_edge;    ///< size M+1, strictly increasing
  std::vector<double> dx;        ///< cell widths, size M
  std::vector<double> dx_edge;   ///< center-to-center spacing per edge, size M+1
                                 ///< (boundary edges use the adjacent cell width)

  int edges() const { return cells + 1; }
  bool interior_edge(int e) const { return e > 0 && e < cells; }
};

/// Uniform subdivision of [x_start, x_end] into M cells.
/// Throws ConfigError for a non-positive extent or M < 3.
Grid1D build_grid(double x_start, double x_end, int cells);

}  // namespace mlswe
