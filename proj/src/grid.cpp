#include "mlswe/grid.hpp"

#include <string>

#include "mlswe/errors.hpp"

namespace mlswe {

Grid1D build_grid(double x_start, double x_end, int cells) {
  if (!(x_end > x_start)) {
    throw ConfigError("grid extent must be positive, got [" + std::to_string(x_start) +
                      ", " + std::to_string(x_end) + "]");
  }
  if (cells < 3) {
    throw ConfigError("grid needs at least 3 cells, got " + std::to_string(cells));
  }

  Grid1D g;
  g.x_start = x_start;
  g.x_end = x_end;
  g.cells = cells;

  const double width = (x_end - x_start) / cells;
  g.x_edge.resize(cells + 1);
  for (int e = 0; e <= cells; ++e) {
    g.x_edge[e] = x_start + e * width;
  }
  g.x_edge[cells] = x_end;

  g.x_center.resize(cells);
  g.dx.resize(cells);
  for (int i = 0; i < cells; ++i) {
    g.x_center[i] = 0.5 * (g.x_edge[i] + g.x_edge[i + 1]);
    g.dx[i] = g.x_edge[i + 1] - g.x_edge[i];
  }

  g.dx_edge.resize(cells + 1);
  g.dx_edge[0] = g.dx[0];
  g.dx_edge[cells] = g.dx[cells - 1];
  for (int e = 1; e < cells; ++e) {
    g.dx_edge[e] = g.x_center[e] - g.x_center[e - 1];
  }
  return g;
}

}  // namespace mlswe
