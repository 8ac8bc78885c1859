#include "mlswe/assembly.hpp"

#include <cassert>
#include <cmath>

#include "mlswe/errors.hpp"

namespace mlswe {

void compute_frozen_closures(const LayerLayout& layout, const PhysicsParams& physics,
                             const EdgeFields& edges, std::span<const double> u_flat,
                             FrozenClosures& out) {
  const int ne = layout.edges();
  out.nu.assign(layout.interface_values(), 0.0);
  out.cf_absu1.assign(ne, 0.0);
  out.cw_tilde.assign(ne, 0.0);

  for (int e = 0; e < ne; ++e) {
    const LayerScheme& s = layout.edge_scheme(e);
    const int n = s.count;
    const int off = layout.edge_offset(e);
    const double h = edges.h[e];
    const double u1 = u_flat[off];

    // ln(cum_k h / dz0) = ln(cum_k) + ln(h/dz0); one log per edge.
    const double log_h_dz0 = std::log(h / physics.dz0);
    if (!(s.fractions[0] * h > physics.dz0)) {
      throw ClosureError("bottom layer thinner than the roughness length at edge " +
                         std::to_string(e));
    }

    // With a single layer dz_r = l_1 h = h and the log-law coefficient
    // degenerates to its continuous limit of zero.
    if (n > 1) {
      const double log_r = s.log_cumulative[0] + log_h_dz0;
      const double cf =
          physics.kappa * physics.kappa * (1.0 - s.fractions[0]) / (log_r * log_r);
      out.cf_absu1[e] = cf * std::abs(u1);
    }
    out.cw_tilde[e] = physics.cw * std::abs(physics.u_wind - u_flat[off + n - 1]);

    const int ioff = layout.interface_offset(e);
    const double kappa_absu1 = physics.kappa * std::abs(u1);
    for (int k = 1; k < n; ++k) {
      const double ustar = kappa_absu1 / (s.log_cumulative[k - 1] + log_h_dz0);
      out.nu[ioff + k - 1] =
          physics.kappa * ustar * s.cumulative[k] * h * (1.0 - s.cumulative[k]);
    }
  }
}

void assemble_vertical_matrix(const LayerScheme& scheme, double h_edge, double w,
                              std::span<const double> nu, double cf_absu1,
                              double cw_tilde, std::span<double> lower,
                              std::span<double> diag, std::span<double> upper) {
  const int n = scheme.count;
  for (int a = 0; a < n; ++a) {
    double d = scheme.fractions[a] * h_edge;
    if (a + 1 < n) {
      const double c = w * nu[a] / (scheme.half_fraction[a] * h_edge);
      d += c;
      upper[a] = -c;
    } else {
      d += w * cw_tilde;
      upper[a] = 0.0;
    }
    if (a > 0) {
      const double c = w * nu[a - 1] / (scheme.half_fraction[a - 1] * h_edge);
      d += c;
      lower[a] = -c;
    } else {
      d += w * cf_absu1;
      lower[a] = 0.0;
    }
    diag[a] = d;
  }
}

TridiagonalSystem assemble_vertical_matrix(const State& state, const Grid1D& grid,
                                           const LayerLayout& layout,
                                           const PhysicsParams& physics,
                                           const BoundaryConditions& bc, int e,
                                           double w) {
  EdgeFields edges;
  compute_edge_fields(grid, layout, bc, state, state.time, physics.h_min, edges);
  FrozenClosures closures;
  compute_frozen_closures(layout, physics, edges, state.u, closures);

  const LayerScheme& s = layout.edge_scheme(e);
  TridiagonalSystem sys;
  sys.resize(s.count);
  const int ioff = layout.interface_offset(e);
  assemble_vertical_matrix(s, edges.h[e], w,
                           std::span<const double>(closures.nu).subspan(ioff, s.count - 1),
                           closures.cf_absu1[e], closures.cw_tilde[e], sys.lower,
                           sys.diag, sys.upper);
  return sys;
}

void assemble_free_surface_system(const Grid1D& grid, double w, double g,
                                  std::span<const double> hta_h,
                                  std::span<const double> hta_f,
                                  std::span<const double> rhs_cells,
                                  std::optional<double> eta_left,
                                  std::optional<double> eta_right,
                                  TridiagonalSystem& out) {
  const int m = grid.cells;
  out.resize(m);

  for (int i = 0; i < m; ++i) {
    double diag = grid.dx[i];
    double rhs = rhs_cells[i];
    const int el = i;
    const int er = i + 1;
    if (grid.interior_edge(er)) {
      const double c = g * w * w * hta_h[er] / grid.dx_edge[er];
      assert(hta_h[er] > 0.0);
      diag += c;
      out.upper[i] = -c;
      rhs -= w * hta_f[er];
    }
    if (grid.interior_edge(el)) {
      const double c = g * w * w * hta_h[el] / grid.dx_edge[el];
      diag += c;
      out.lower[i] = -c;
      rhs += w * hta_f[el];
    }
    out.diag[i] = diag;
    out.rhs[i] = rhs;
  }

  if (eta_left) {
    out.diag[0] = grid.dx[0];
    out.upper[0] = 0.0;
    out.rhs[0] = grid.dx[0] * *eta_left;
    out.rhs[1] -= out.lower[1] * *eta_left;
    out.lower[1] = 0.0;
  }
  if (eta_right) {
    out.diag[m - 1] = grid.dx[m - 1];
    out.lower[m - 1] = 0.0;
    out.rhs[m - 1] = grid.dx[m - 1] * *eta_right;
    out.rhs[m - 2] -= out.upper[m - 2] * *eta_right;
    out.upper[m - 2] = 0.0;
  }
}

}  // namespace mlswe
