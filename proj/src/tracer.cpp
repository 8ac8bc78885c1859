#include "mlswe/tracer.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "mlswe/errors.hpp"

namespace mlswe {

double interface_tracer_value(double rho_lo, double rho_hi, double g) {
  if (g > 0.0) return rho_hi;
  if (g < 0.0) return rho_lo;
  return 0.5 * (rho_lo + rho_hi);
}

double mapped_cell_value(const LayerLayout& layout, std::span<const double> flat,
                         int cell, int target_scheme, int layer) {
  const int from = layout.cell_scheme_id(cell);
  const int off = layout.cell_offset(cell);
  if (from == target_scheme) return flat[off + layer];

  // Cells never carry fewer layers than their edges, so this is an aggregation.
  const TransitionMap* map = layout.find_transition(from, target_scheme);
  assert(map != nullptr && map->fine_scheme == from);
  const LayerScheme& fine = layout.scheme(from);
  const auto [lo, hi] = map->ranges[layer];
  double weighted = 0.0;
  double weight = 0.0;
  for (int a = lo; a <= hi; ++a) {
    weighted += fine.fractions[a] * flat[off + a];
    weight += fine.fractions[a];
  }
  return weighted / weight;
}

void TracerUpdate::begin(const Grid1D& grid, const LayerLayout& layout,
                         const State& state) {
  numerator.assign(layout.cell_values(), 0.0);
  mass.assign(layout.cell_values(), 0.0);
  for (int i = 0; i < grid.cells; ++i) {
    const LayerScheme& s = layout.cell_scheme(i);
    const int off = layout.cell_offset(i);
    const double vol = grid.dx[i] * state.depth(i);
    for (int a = 0; a < s.count; ++a) {
      mass[off + a] = vol * s.fractions[a];
      numerator[off + a] = mass[off + a] * state.rho[off + a];
    }
  }
}

void TracerUpdate::add_pass(const Grid1D& grid, const LayerLayout& layout,
                            std::span<const double> h_edge,
                            std::span<const double> u_flux,
                            std::span<const double> rho_flat,
                            std::span<const double> g_center, double weight) {
  const int m = grid.cells;

  // Horizontal upwind fluxes, accumulated edge by edge so that what leaves a
  // cell enters its neighbour bit for bit.
  for (int e = 0; e <= m; ++e) {
    const int es = layout.edge_scheme_id(e);
    const LayerScheme& s = layout.scheme(es);
    const int off = layout.edge_offset(e);
    const int cell_l = e > 0 ? e - 1 : 0;      // boundary: donor falls back inside
    const int cell_r = e < m ? e : m - 1;
    for (int a = 0; a < s.count; ++a) {
      const double uf = u_flux[off + a];
      double rho_edge;
      if (uf > 0.0) {
        rho_edge = mapped_cell_value(layout, rho_flat, cell_l, es, a);
      } else if (uf < 0.0) {
        rho_edge = mapped_cell_value(layout, rho_flat, cell_r, es, a);
      } else {
        rho_edge = 0.5 * (mapped_cell_value(layout, rho_flat, cell_l, es, a) +
                          mapped_cell_value(layout, rho_flat, cell_r, es, a));
      }
      const double mass_flux = s.fractions[a] * h_edge[e] * uf;
      const double tracer_flux = mass_flux * rho_edge;

      // Deposit into the adjacent cell budgets, splitting a coarse-edge flux
      // over the mapped fine layers in proportion to the fine fractions.
      auto deposit = [&](int cell, double sign) {
        const int cs = layout.cell_scheme_id(cell);
        const int coff = layout.cell_offset(cell);
        if (cs == es) {
          numerator[coff + a] += sign * weight * tracer_flux;
          mass[coff + a] += sign * weight * mass_flux;
          return;
        }
        const TransitionMap* map = layout.find_transition(cs, es);
        assert(map != nullptr && map->fine_scheme == cs);
        const LayerScheme& fine = layout.scheme(cs);
        const auto [lo, hi] = map->ranges[a];
        const double inv = 1.0 / s.fractions[a];
        for (int f = lo; f <= hi; ++f) {
          const double share = fine.fractions[f] * inv;
          numerator[coff + f] += sign * weight * tracer_flux * share;
          mass[coff + f] += sign * weight * mass_flux * share;
        }
      };
      // Flux leaves the left cell (sign -1 on the inflow side convention):
      // cell e-1 loses through its right edge, cell e gains through its left.
      if (e > 0) deposit(e - 1, -1.0);
      if (e < m) deposit(e, +1.0);
    }
  }

  // Vertical exchange between adjacent layers of each column.
  for (int i = 0; i < m; ++i) {
    const LayerScheme& s = layout.cell_scheme(i);
    const int off = layout.cell_offset(i);
    const int goff = layout.cell_offset(i) - i;  // per-interface offset: count-1 per cell
    const double dxw = grid.dx[i] * weight;
    for (int k = 0; k < s.count - 1; ++k) {
      const double g = g_center[goff + k];
      const double rho_iface =
          interface_tracer_value(rho_flat[off + k], rho_flat[off + k + 1], g);
      // G_{k+1/2} adds mass to layer k and removes it from layer k+1.
      numerator[off + k] += dxw * rho_iface * g;
      numerator[off + k + 1] -= dxw * rho_iface * g;
      mass[off + k] += dxw * g;
      mass[off + k + 1] -= dxw * g;
    }
  }
}

void TracerUpdate::finish(const Grid1D& grid, const LayerLayout& layout,
                          std::span<double> rho_out) const {
  for (int i = 0; i < grid.cells; ++i) {
    const LayerScheme& s = layout.cell_scheme(i);
    const int off = layout.cell_offset(i);
    for (int a = 0; a < s.count; ++a) {
      const double mlayer = mass[off + a];
      if (!(mlayer > 0.0)) {
        throw SolverError("layer mass vanished in cell " + std::to_string(i) +
                          ", layer " + std::to_string(a + 1) +
                          " (vertical transfer too strong for this time step)");
      }
      rho_out[off + a] = numerator[off + a] / mlayer;
    }
  }
}

void tracer_step_theta(const Grid1D& grid, const LayerLayout& layout,
                       const State& state_n, const EdgeFields& edges,
                       std::span<const double> u_new, double theta, double dt,
                       std::span<double> rho_out) {
  std::vector<double> u_flux(layout.edge_values());
  for (int k = 0; k < layout.edge_values(); ++k) {
    u_flux[k] = theta * u_new[k] + (1.0 - theta) * state_n.u[k];
  }
  // The vertical transfer is evaluated at the same theta-weighted velocities
  // as the horizontal fluxes; the implied layer masses then integrate exactly
  // to the new depths, which keeps both a uniform tracer and the total tracer
  // mass invariant.
  std::vector<double> g_center(layout.cell_values() - grid.cells, 0.0);
  for (int i = 0; i < grid.cells; ++i) {
    const int n = layout.cell_count(i);
    const int goff = layout.cell_offset(i) - i;
    mass_transfer_center(grid, layout, u_flux, edges, i,
                         std::span<double>(g_center).subspan(goff, n - 1));
  }
  TracerUpdate upd;
  upd.begin(grid, layout, state_n);
  upd.add_pass(grid, layout, edges.h, u_flux, state_n.rho, g_center, dt);
  upd.finish(grid, layout, rho_out);
}

}  // namespace mlswe
