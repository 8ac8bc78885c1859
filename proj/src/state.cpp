#include "mlswe/state.hpp"

namespace mlswe {

namespace {

void set_edge_velocities(const LayerLayout& layout, const BoundarySpec& spec, double t,
                         double h, int e, State& state) {
  auto col = state.u_col(layout, e);
  const int n = layout.edge_count(e);
  switch (spec.kind) {
    case BoundaryKind::Wall:
      for (int a = 0; a < n; ++a) col[a] = 0.0;
      break;
    case BoundaryKind::Discharge: {
      const double mean = spec.discharge(t) / h;
      for (int a = 0; a < n; ++a) {
        const double shape = spec.profile.empty() ? 1.0 : spec.profile[a];
        col[a] = shape * mean;
      }
      break;
    }
    case BoundaryKind::Surface:
      break;  // evolves with the momentum equation
  }
}

}  // namespace

void apply_boundary_velocities(const LayerLayout& layout, const BoundaryConditions& bc,
                               double t, std::span<const double> h_edge, State& state) {
  const int last = layout.edges() - 1;
  set_edge_velocities(layout, bc.left, t, h_edge[0], 0, state);
  set_edge_velocities(layout, bc.right, t, h_edge[last], last, state);
}

void apply_boundary_surface(const Grid1D& grid, const BoundaryConditions& bc, double t,
                            State& state) {
  if (bc.left.kind == BoundaryKind::Surface) {
    state.eta[0] = bc.left.surface(t);
  }
  if (bc.right.kind == BoundaryKind::Surface) {
    state.eta[grid.cells - 1] = bc.right.surface(t);
  }
}

}  // namespace mlswe
