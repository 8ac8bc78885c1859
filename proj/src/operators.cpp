#include "mlswe/operators.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "mlswe/errors.hpp"

namespace mlswe {

namespace {

double depth_average(const LayerScheme& scheme, std::span<const double> col) {
  double s = 0.0;
  for (int a = 0; a < scheme.count; ++a) s += scheme.fractions[a] * col[a];
  return s;
}

}  // namespace

double upwind_height(double h_left, double h_right, double ubar) {
  if (ubar > 0.0) return h_left;
  if (ubar < 0.0) return h_right;
  return 0.5 * (h_left + h_right);
}

void compute_edge_fields(const Grid1D& grid, const LayerLayout& layout,
                         const BoundaryConditions& bc, const State& state, double t,
                         double h_min, EdgeFields& out) {
  const int m = grid.cells;
  out.resize(m + 1);

  for (int i = 0; i < m; ++i) {
    if (!(state.depth(i) >= h_min)) {
      throw DryingError("cell " + std::to_string(i) + " dried out at t = " +
                        std::to_string(t) + " (h = " + std::to_string(state.depth(i)) +
                        ")");
    }
  }

  for (int e = 0; e <= m; ++e) {
    out.ubar[e] = depth_average(layout.edge_scheme(e), state.u_col(layout, e));
  }

  for (int e = 1; e < m; ++e) {
    out.h[e] = upwind_height(state.depth(e - 1), state.depth(e), out.ubar[e]);
  }
  // Left boundary: flow from outside comes from a ghost cell.
  if (bc.left.kind == BoundaryKind::Surface) {
    const double ghost = bc.left.surface(t) - state.bed[0];
    out.h[0] = upwind_height(ghost, state.depth(0), out.ubar[0]);
  } else {
    out.h[0] = state.depth(0);
  }
  if (bc.right.kind == BoundaryKind::Surface) {
    const double ghost = bc.right.surface(t) - state.bed[m - 1];
    out.h[m] = upwind_height(state.depth(m - 1), ghost, out.ubar[m]);
  } else {
    out.h[m] = state.depth(m - 1);
  }

  for (int e = 0; e <= m; ++e) out.flux[e] = out.h[e] * out.ubar[e];
}

double mapped_edge_value_across(const LayerLayout& layout,
                                std::span<const double> u_flat, int de,
                                int target_scheme, int layer) {
  const int from = layout.edge_scheme_id(de);
  const int off = layout.edge_offset(de);
  const TransitionMap* map = layout.find_transition(from, target_scheme);
  assert(map != nullptr);
  if (map->fine_scheme == from) {
    // Target is coarser: fraction-weighted mean over the covered fine layers.
    const LayerScheme& fine = layout.scheme(from);
    const auto [lo, hi] = map->ranges[layer];
    double weighted = 0.0;
    double weight = 0.0;
    for (int a = lo; a <= hi; ++a) {
      weighted += fine.fractions[a] * u_flat[off + a];
      weight += fine.fractions[a];
    }
    return weighted / weight;
  }
  // Target is finer: take the containing coarse layer's value.
  return u_flat[off + map->fine_to_coarse[layer]];
}

void mass_transfer_edge(const Grid1D& grid, const LayerLayout& layout,
                        std::span<const double> u_flat, const EdgeFields& edges, int e,
                        std::span<double> out) {
  (void)grid;
  assert(e > 0 && e < layout.edges() - 1);
  const int scheme = layout.edge_scheme_id(e);
  const LayerScheme& s = layout.scheme(scheme);
  const int n = s.count;

  const bool plain_left = layout.edge_scheme_id(e - 1) == scheme;
  const bool plain_right = layout.edge_scheme_id(e + 1) == scheme;
  const int off_l = layout.edge_offset(e - 1);
  const int off_c = layout.edge_offset(e);
  const int off_r = layout.edge_offset(e + 1);

  auto donor = [&](int d, int doff, bool plain, int b) {
    return plain ? u_flat[doff + b]
                 : mapped_edge_value_across(layout, u_flat, d, scheme, b);
  };

  // Deviation flux h (u_b - ubar) of one cell, evaluated at the edge upwind
  // of the cell-averaged layer velocity.
  auto cell_deviation = [&](int le, int lo, bool lp, int re, int ro, bool rp, int b) {
    const double u_left = donor(le, lo, lp, b);
    const double u_right = donor(re, ro, rp, b);
    const double u_avg = u_left + u_right;
    if (u_avg > 0.0) return edges.h[le] * (u_left - edges.ubar[le]);
    if (u_avg < 0.0) return edges.h[re] * (u_right - edges.ubar[re]);
    return 0.5 * (edges.h[le] * (u_left - edges.ubar[le]) +
                  edges.h[re] * (u_right - edges.ubar[re]));
  };

  double prefix = 0.0;
  for (int b = 0; b < n - 1; ++b) {
    const double phi_left =
        cell_deviation(e - 1, off_l, plain_left, e, off_c, true, b);
    const double phi_right =
        cell_deviation(e, off_c, true, e + 1, off_r, plain_right, b);
    prefix += s.fractions[b] * (phi_right - phi_left);
    out[b] = prefix;
  }
}

void mass_transfer_center(const Grid1D& grid, const LayerLayout& layout,
                          std::span<const double> u_flat, const EdgeFields& edges, int i,
                          std::span<double> out) {
  const int cs = layout.cell_scheme_id(i);
  const LayerScheme& s = layout.scheme(cs);
  const int n = s.count;
  const int el = i;
  const int er = i + 1;

  // Per-layer flux through one edge, seen in the cell scheme. A coarser edge
  // contributes l_b h u_B for every fine layer b inside coarse layer B, which
  // splits the coarse flux proportionally to the fine fractions.
  auto layer_flux = [&](int e, int b) {
    const double u = mapped_edge_value(layout, u_flat, e, cs, b);
    return s.fractions[b] * edges.h[e] * u;
  };

  double total = 0.0;
  // First pass for the total flux difference; cheap since n is small.
  for (int b = 0; b < n; ++b) total += layer_flux(er, b) - layer_flux(el, b);

  const double inv_dx = 1.0 / grid.dx[i];
  double prefix = 0.0;
  for (int b = 0; b < n - 1; ++b) {
    prefix += (layer_flux(er, b) - layer_flux(el, b)) - s.fractions[b] * total;
    out[b] = prefix * inv_dx;
  }
}

double advection_term(const Grid1D& grid, const LayerLayout& layout,
                      std::span<const double> u_flat, int e, int layer) {
  const double ue = u_flat[layout.edge_offset(e) + layer];
  if (ue == 0.0) return 0.0;

  const int last = layout.edges() - 1;
  const int dir = ue > 0.0 ? -1 : 1;
  const int d1 = e + dir;
  const int d2 = e + 2 * dir;
  if (d1 < 0 || d1 > last) return 0.0;

  const int scheme = layout.edge_scheme_id(e);
  const double u1 = mapped_edge_value(layout, u_flat, d1, scheme, layer);
  const double dx = std::abs(grid.x_edge[e] - grid.x_edge[d1]);
  double slope;
  if (d2 < 0 || d2 > last) {
    slope = (ue - u1) / dx;
  } else {
    const double u2 = mapped_edge_value(layout, u_flat, d2, scheme, layer);
    slope = (3.0 * ue - 4.0 * u1 + u2) / (2.0 * dx);
  }
  // `slope` approximates du/dx in the upwind direction; flip for donors right.
  if (dir == 1) slope = -slope;
  return -ue * slope;
}

void recover_vertical_velocity(const Grid1D& grid, const LayerLayout& layout,
                               const State& state, int i, std::span<double> w_minus,
                               std::span<double> w_plus) {
  const int cs = layout.cell_scheme_id(i);
  const LayerScheme& s = layout.scheme(cs);
  const int n = s.count;
  const int m = grid.cells;

  auto central = [&](auto&& value) {
    const int lo = i > 0 ? i - 1 : i;
    const int hi = i + 1 < m ? i + 1 : i;
    return (value(hi) - value(lo)) / (grid.x_center[hi] - grid.x_center[lo]);
  };
  const double dbdx = central([&](int j) { return state.bed[j]; });
  const double dhdx = central([&](int j) { return state.depth(j); });

  const double h = state.depth(i);
  const double inv_dx = 1.0 / grid.dx[i];

  auto edge_u = [&](int e, int a) {
    return mapped_edge_value(layout, state.u, e, cs, a);
  };

  w_plus[0] = 0.5 * (edge_u(i, 0) + edge_u(i + 1, 0)) * dbdx;  // G_{1/2} = 0
  w_minus[0] = w_plus[0];
  for (int a = 0; a < n; ++a) {
    const double div_u = (edge_u(i + 1, a) - edge_u(i, a)) * inv_dx;
    w_minus[a + 1] = w_plus[a] - s.fractions[a] * h * div_u;
    if (a + 1 < n) {
      const double dzdx = dbdx + s.cumulative[a + 1] * dhdx;
      const double u_lo = 0.5 * (edge_u(i, a) + edge_u(i + 1, a));
      const double u_hi = 0.5 * (edge_u(i, a + 1) + edge_u(i + 1, a + 1));
      w_plus[a + 1] = (u_hi - u_lo) * dzdx + w_minus[a + 1];
    } else {
      w_plus[a + 1] = w_minus[a + 1];
    }
  }
}

}  // namespace mlswe
