#include <doctest.h>

#include <cmath>
#include <random>

#include "mlswe/errors.hpp"
#include "mlswe/operators.hpp"
#include "test_util.hpp"

using namespace mlswe;
using namespace mlswe::testing;

namespace {

BoundaryConditions walls() { return {}; }

EdgeFields fields_of(const Grid1D& g, const LayerLayout& layout, const State& s,
                     const BoundaryConditions& bc = walls()) {
  EdgeFields f;
  compute_edge_fields(g, layout, bc, s, s.time, 1e-6, f);
  return f;
}

}  // namespace

TEST_CASE("upwind height rule") {
  CHECK(upwind_height(10.0, 12.0, 1.0) == 10.0);
  CHECK(upwind_height(10.0, 12.0, -1.0) == 12.0);
  CHECK(upwind_height(10.0, 12.0, 0.0) == doctest::Approx(11.0));
  CHECK(upwind_height(7.0, 7.0, -2.0) == 7.0);
}

TEST_CASE("edge fields detect drying") {
  const Grid1D g = build_grid(0.0, 10.0, 5);
  const LayerLayout layout = uniform_layout(g, 2);
  State s = make_state(
      g, layout, [](double) { return 1.0; }, [](double) { return 0.0; },
      [](double, int) { return 0.0; });
  s.eta[2] = -1.0;  // below the bed
  EdgeFields f;
  CHECK_THROWS_AS(compute_edge_fields(g, layout, walls(), s, 0.0, 1e-6, f),
                  DryingError);
}

TEST_CASE("mass transfer at edges vanishes for vertically uniform flow") {
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = split_layout(g, 4, 2);
  const State s = make_state(
      g, layout, [](double x) { return 5.0 + 0.01 * std::sin(x); },
      [](double) { return 0.0; },
      [](double x, int) { return 0.3 + 0.05 * std::cos(0.1 * x); });
  const EdgeFields f = fields_of(g, layout, s);

  std::vector<double> out(4);
  for (int e = 1; e < g.cells; ++e) {
    const int n = layout.edge_count(e);
    mass_transfer_edge(g, layout, s.u, f, e,
                       std::span<double>(out.data(), n - 1));
    for (int k = 0; k < n - 1; ++k) CHECK(std::abs(out[k]) <= 1e-14);
  }
}

TEST_CASE("mass transfer at edges vanishes without x variation") {
  // two equal layers, h = 1 everywhere, velocities constant in x
  const Grid1D g = build_grid(0.0, 6.0, 6);
  const LayerLayout layout = uniform_layout(g, 2);
  const State s = make_state(
      g, layout, [](double) { return 1.0; }, [](double) { return 0.0; },
      [](double, int a) { return a == 0 ? 0.0 : 2.0; });
  const EdgeFields f = fields_of(g, layout, s);
  std::vector<double> out(1);
  for (int e = 1; e < g.cells; ++e) {
    mass_transfer_edge(g, layout, s.u, f, e, out);
    CHECK(std::abs(out[0]) <= 1e-14);
  }
}

TEST_CASE("cell-centered transfer: two-layer hand example") {
  // l = (1/2, 1/2), h = 1, dx = 1; u_1 rises by +1 across the cell, u_2 by -1.
  const Grid1D g = build_grid(0.0, 6.0, 6);
  const LayerLayout layout = uniform_layout(g, 2);
  State s = make_state(
      g, layout, [](double) { return 1.0; }, [](double) { return 0.0; },
      [](double, int) { return 0.0; });
  const int i = 3;
  const int le = layout.edge_offset(i);
  const int re = layout.edge_offset(i + 1);
  s.u[le + 0] = 0.0;
  s.u[re + 0] = 1.0;
  s.u[le + 1] = 0.0;
  s.u[re + 1] = -1.0;
  EdgeFields f;
  f.resize(g.edges());
  std::fill(f.h.begin(), f.h.end(), 1.0);

  std::vector<double> out(1);
  mass_transfer_center(g, layout, s.u, f, i, out);
  CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("cell-centered transfer vanishes for vertically uniform flow") {
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = split_layout(g, 6, 3);
  const State s = make_state(
      g, layout, [](double x) { return 5.0 + 0.03 * std::cos(x); },
      [](double x) { return 0.2 * std::sin(0.05 * x); },
      [](double x, int) { return 0.4 + 0.1 * std::sin(0.07 * x); });
  const EdgeFields f = fields_of(g, layout, s);
  std::vector<double> out(8);
  for (int i = 0; i < g.cells; ++i) {
    const int n = layout.cell_count(i);
    mass_transfer_center(g, layout, s.u, f, i, std::span<double>(out.data(), n - 1));
    for (int k = 0; k < n - 1; ++k) CHECK(std::abs(out[k]) <= 1e-14);
  }
}

TEST_CASE("cell-centered transfer telescopes to zero at the surface") {
  std::mt19937 rng(11);
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = split_layout(g, 4, 2);

  for (int trial = 0; trial < 25; ++trial) {
    const State s = random_state(g, layout, rng);
    const EdgeFields f = fields_of(g, layout, s);
    std::vector<double> out(8);
    for (int i = 0; i < g.cells; ++i) {
      const LayerScheme& cs = layout.cell_scheme(i);
      const int n = cs.count;
      mass_transfer_center(g, layout, s.u, f, i, std::span<double>(out.data(), n - 1));

      // independent reconstruction of the per-layer flux differences
      auto layer_flux = [&](int e, int b) {
        const int es = layout.edge_scheme_id(e);
        double u;
        if (es == layout.cell_scheme_id(i)) {
          u = s.u[layout.edge_offset(e) + b];
        } else {
          const TransitionMap* map = layout.find_transition(es, layout.cell_scheme_id(i));
          REQUIRE(map != nullptr);
          u = s.u[layout.edge_offset(e) + map->fine_to_coarse[b]];
        }
        return cs.fractions[b] * f.h[e] * u;
      };
      double total = 0.0;
      for (int b = 0; b < n; ++b) total += layer_flux(i + 1, b) - layer_flux(i, b);
      // add the top layer's contribution to the prefix: must close to zero
      const double g_top =
          (n > 1 ? out[n - 2] : 0.0) +
          ((layer_flux(i + 1, n - 1) - layer_flux(i, n - 1)) -
           cs.fractions[n - 1] * total) /
              g.dx[i];
      CHECK(std::abs(g_top) <= 1e-12 * (1.0 + std::abs(total)));
    }
  }
}

TEST_CASE("advection term") {
  const Grid1D g = build_grid(0.0, 100.0, 20);
  const LayerLayout layout = uniform_layout(g, 3);

  // spatially uniform velocity: no advection anywhere
  {
    const State s = make_state(
        g, layout, [](double) { return 10.0; }, [](double) { return 0.0; },
        [](double, int a) { return 0.7 + 0.1 * a; });
    for (int e = 1; e < g.cells; ++e) {
      for (int a = 0; a < 3; ++a) {
        CHECK(advection_term(g, layout, s.u, e, a) == doctest::Approx(0.0));
      }
    }
  }

  // second order upwind is exact on linear profiles: u(x) = c x -> -u c
  {
    const double c = 0.03;
    const State s = make_state(
        g, layout, [](double) { return 10.0; }, [](double) { return 0.0; },
        [c](double x, int) { return c * x; });
    for (int e = 4; e < g.cells - 4; ++e) {
      const double ue = c * g.x_edge[e];
      CHECK(advection_term(g, layout, s.u, e, 0) ==
            doctest::Approx(-ue * c).epsilon(1e-12));
    }
  }

  // negative velocities pull the stencil from the right
  {
    const double c = -0.05;
    const State s = make_state(
        g, layout, [](double) { return 10.0; }, [](double) { return 0.0; },
        [&](double x, int) { return c * (g.x_end - x) - 1.0; });
    const int e = 10;
    const double ue = s.u[layout.edge_offset(e)];
    CHECK(ue < 0.0);
    // du/dx = -c exactly
    CHECK(advection_term(g, layout, s.u, e, 0) ==
          doctest::Approx(-ue * (-c)).epsilon(1e-12));
  }
}

TEST_CASE("advection across a layer transition is exact for constant donors") {
  const Grid1D g = build_grid(0.0, 100.0, 20);
  const LayerLayout layout = split_layout(g, 10, 1);
  const State s = make_state(
      g, layout, [](double) { return 10.0; }, [](double) { return 0.0; },
      [](double, int) { return 0.8; });
  for (int e = 1; e < g.cells; ++e) {
    for (int a = 0; a < layout.edge_count(e); ++a) {
      CHECK(std::abs(advection_term(g, layout, s.u, e, a)) <= 1e-14);
    }
  }
}

TEST_CASE("vertical velocity recovery") {
  const Grid1D g = build_grid(0.0, 100.0, 20);
  const LayerLayout layout = uniform_layout(g, 4);

  // uniform flow over a flat bottom: w vanishes identically
  {
    const State s = make_state(
        g, layout, [](double) { return 10.0; }, [](double) { return 0.0; },
        [](double, int) { return 0.5; });
    std::vector<double> wm(5), wp(5);
    for (int i = 0; i < g.cells; ++i) {
      recover_vertical_velocity(g, layout, s, i, wm, wp);
      for (int k = 0; k <= 4; ++k) {
        CHECK(std::abs(wm[k]) <= 1e-14);
        CHECK(std::abs(wp[k]) <= 1e-14);
      }
    }
  }

  // kinematic bottom condition on a sloped bed
  {
    const double slope = 0.02;
    const State s = make_state(
        g, layout, [](double) { return 10.0; },
        [slope](double x) { return slope * x; }, [](double, int) { return 0.7; });
    std::vector<double> wm(5), wp(5);
    recover_vertical_velocity(g, layout, s, 10, wm, wp);
    CHECK(wp[0] == doctest::Approx(0.7 * slope).epsilon(1e-12));
  }

  // single layer with divergent flow: w decreases linearly across the depth
  {
    const LayerLayout single = uniform_layout(g, 1);
    const double c = 0.01;
    const State s = make_state(
        g, single, [](double) { return 2.0; }, [](double) { return 0.0; },
        [c](double x, int) { return c * x; });
    std::vector<double> wm(2), wp(2);
    recover_vertical_velocity(g, single, s, 10, wm, wp);
    CHECK(wp[0] == doctest::Approx(0.0).epsilon(1e-14));
    // dw over the layer = -h du/dx
    CHECK(wm[1] == doctest::Approx(-2.0 * c).epsilon(1e-10));
  }
}

TEST_CASE("vertical velocity jump relation holds for random states") {
  std::mt19937 rng(5);
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = split_layout(g, 4, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const State s = random_state(g, layout, rng);
    std::vector<double> wm(5), wp(5);
    for (int i = 1; i < g.cells - 1; ++i) {
      const LayerScheme& cs = layout.cell_scheme(i);
      recover_vertical_velocity(g, layout, s, i,
                                std::span<double>(wm.data(), cs.count + 1),
                                std::span<double>(wp.data(), cs.count + 1));
      const double dbdx = (s.bed[i + 1] - s.bed[i - 1]) /
                          (g.x_center[i + 1] - g.x_center[i - 1]);
      const double dhdx = (s.depth(i + 1) - s.depth(i - 1)) /
                          (g.x_center[i + 1] - g.x_center[i - 1]);
      for (int k = 1; k < cs.count; ++k) {
        const double dzdx = dbdx + cs.cumulative[k] * dhdx;
        auto ucell = [&](int a) {
          return 0.5 * (mapped_edge_value(layout, s.u, i, layout.cell_scheme_id(i), a) +
                        mapped_edge_value(layout, s.u, i + 1, layout.cell_scheme_id(i), a));
        };
        CHECK(wp[k] - wm[k] ==
              doctest::Approx((ucell(k) - ucell(k - 1)) * dzdx).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("boundary condition application") {
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = uniform_layout(g, 5);
  State s = make_state(
      g, layout, [](double) { return 5.0; }, [](double) { return 0.0; },
      [](double, int) { return 1.0; });

  BoundaryConditions bc;
  bc.left.kind = BoundaryKind::Discharge;
  bc.left.q0 = 4.42;
  bc.right.kind = BoundaryKind::Surface;
  bc.right.eta0 = 100.0;
  bc.right.eta_amplitude = 3.0;
  bc.right.eta_omega = 2.0 * M_PI / 43200.0;

  std::vector<double> h_edge(g.edges(), 5.0);
  apply_boundary_velocities(layout, bc, 0.0, h_edge, s);
  for (int a = 0; a < 5; ++a) {
    CHECK(s.u[layout.edge_offset(0) + a] == doctest::Approx(0.884).epsilon(1e-12));
  }
  // surface side velocities untouched
  CHECK(s.u[layout.edge_offset(g.cells)] == 1.0);

  // quarter period: eta = 100 + 3
  apply_boundary_surface(g, bc, 43200.0 / 4.0, s);
  CHECK(s.eta[g.cells - 1] == doctest::Approx(103.0).epsilon(1e-12));

  BoundaryConditions closed;
  apply_boundary_velocities(layout, closed, 0.0, h_edge, s);
  for (int a = 0; a < 5; ++a) {
    CHECK(s.u[layout.edge_offset(0) + a] == 0.0);
    CHECK(s.u[layout.edge_offset(g.cells) + a] == 0.0);
  }
}
