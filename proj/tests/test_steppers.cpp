#include <doctest.h>

#include <cmath>
#include <random>

#include "mlswe/assembly.hpp"
#include "mlswe/errors.hpp"
#include "mlswe/steppers.hpp"
#include "mlswe/tableaux.hpp"
#include "test_util.hpp"

using namespace mlswe;
using namespace mlswe::testing;

TEST_CASE("ARK2 tableaux consistency") {
  const ButcherTableaux& t = ark2_tableaux();
  const double s2 = std::sqrt(2.0);

  for (int row = 0; row < 3; ++row) {
    double se = 0.0, si = 0.0;
    for (int col = 0; col < 3; ++col) {
      se += t.a_explicit[row][col];
      si += t.a_implicit[row][col];
    }
    CHECK(se == doctest::Approx(t.c[row]).epsilon(1e-14));
    CHECK(si == doctest::Approx(t.c[row]).epsilon(1e-14));
  }
  CHECK(t.b[0] + t.b[1] + t.b[2] == doctest::Approx(1.0).epsilon(1e-14));
  // second order condition sum b_l c_l = 1/2
  CHECK(t.b[0] * t.c[0] + t.b[1] * t.c[1] + t.b[2] * t.c[2] ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(t.a_implicit[1][1] == doctest::Approx(1.0 - 1.0 / s2).epsilon(1e-15));
  CHECK(t.a_implicit[2][2] == doctest::Approx(1.0 - 1.0 / s2).epsilon(1e-15));
  // stiffly accurate implicit part: last row equals the weights
  for (int col = 0; col < 3; ++col) {
    CHECK(t.a_implicit[2][col] == doctest::Approx(t.b[col]).epsilon(1e-15));
  }
}

TEST_CASE("implicit tableau reproduces TR-BDF2 on a scalar problem") {
  const ButcherTableaux& t = ark2_tableaux();
  const double gamma = 2.0 - std::sqrt(2.0);

  for (double z : {-1.0, -10.0}) {
    // generic ARK recursion for y' = z y with everything in the stiff part
    const double y1 = 1.0;
    const double y2 =
        (y1 + t.a_implicit[1][0] * z * y1) / (1.0 - t.a_implicit[1][1] * z);
    const double y3 =
        (y1 + t.a_implicit[2][0] * z * y1 + t.a_implicit[2][1] * z * y2) /
        (1.0 - t.a_implicit[2][2] * z);
    const double ynext = y1 + z * (t.b[0] * y1 + t.b[1] * y2 + t.b[2] * y3);
    // stiffly accurate: the final combination must equal stage 3
    CHECK(ynext == doctest::Approx(y3).epsilon(1e-12));

    // classical TR-BDF2: trapezoidal to gamma, then BDF2
    const double ystar = (1.0 + 0.5 * gamma * z) / (1.0 - 0.5 * gamma * z);
    const double c1 = 1.0 / (gamma * (2.0 - gamma));
    const double c2 = (1.0 - gamma) * (1.0 - gamma) / (gamma * (2.0 - gamma));
    const double yref =
        (c1 * ystar - c2 * 1.0) / (1.0 - (1.0 - gamma) / (2.0 - gamma) * z);
    CHECK(y3 == doctest::Approx(yref).epsilon(1e-12));
  }
}

TEST_CASE("courant numbers") {
  const Grid1D g = build_grid(0.0, 10000.0, 200);
  const LayerLayout layout = uniform_layout(g, 10);
  State s = make_state(
      g, layout, [](double) { return 10.0; }, [](double) { return 0.0; },
      [](double, int) { return 0.0; });

  auto [cv0, cc0] = courant_numbers(g, layout, s, 9.81, 25.0);
  CHECK(cv0 == 0.0);
  CHECK(cc0 == doctest::Approx(4.952).epsilon(1e-3));

  auto [cv1, cc1] = courant_numbers(g, layout, s, 9.81, 0.0);
  CHECK(cv1 == 0.0);
  CHECK(cc1 == 0.0);

  s.u[layout.edge_offset(5) + 2] = -2.0;
  auto [cv2, cc2] = courant_numbers(g, layout, s, 9.81, 25.0);
  CHECK(cv2 == doctest::Approx(2.0 * 25.0 / 50.0).epsilon(1e-14));
  CHECK(cc2 == doctest::Approx((2.0 + std::sqrt(98.1)) * 0.5).epsilon(1e-12));
}

TEST_CASE("vertical matrix assembly") {
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = uniform_layout(g, 4);
  const LayerScheme& s = layout.edge_scheme(3);
  const double h = 8.0;

  // no viscosity, no friction, no wind: the matrix is diag(l_a h)
  {
    std::vector<double> lower(4), diag(4), upper(4), nu(3, 0.0);
    assemble_vertical_matrix(s, h, 10.0, nu, 0.0, 0.0, lower, diag, upper);
    for (int a = 0; a < 4; ++a) {
      CHECK(diag[a] == doctest::Approx(0.25 * h).epsilon(1e-14));
      CHECK(lower[a] == 0.0);
      CHECK(upper[a] == 0.0);
    }
  }

  // single layer: friction and wind sit on the only diagonal entry
  {
    const LayerLayout single = uniform_layout(g, 1);
    const LayerScheme& s1 = single.edge_scheme(3);
    std::vector<double> lower(1), diag(1), upper(1);
    const double w = 0.55 * 25.0;
    const double cf_absu = 1.4e-3 * 0.8;
    assemble_vertical_matrix(s1, h, w, {}, cf_absu, 0.0, lower, diag, upper);
    CHECK(diag[0] == doctest::Approx(h + w * cf_absu).epsilon(1e-14));
  }

  // rows stay diagonally dominant for arbitrary closure values
  {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    std::vector<double> lower(4), diag(4), upper(4), nu(3);
    for (int trial = 0; trial < 50; ++trial) {
      for (double& v : nu) v = dist(rng);
      assemble_vertical_matrix(s, h, dist(rng) * 20.0, nu, dist(rng) * 1e-2,
                               dist(rng) * 1e-5, lower, diag, upper);
      for (int a = 0; a < 4; ++a) {
        CHECK(diag[a] >= std::abs(lower[a]) + std::abs(upper[a]) - 1e-15);
        CHECK(diag[a] > 0.0);
      }
    }
  }
}

TEST_CASE("free-surface system is symmetric with positive diagonal") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> dist(0.1, 5.0);
  const Grid1D g = build_grid(0.0, 1000.0, 20);

  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> hta_h(g.edges(), 0.0), hta_f(g.edges(), 0.0), rhs(g.cells, 0.0);
    for (int e = 1; e < g.cells; ++e) {
      hta_h[e] = dist(rng);
      hta_f[e] = dist(rng) - 2.5;
    }
    for (int i = 0; i < g.cells; ++i) rhs[i] = dist(rng);
    TridiagonalSystem sys;
    assemble_free_surface_system(g, 0.55 * 25.0, 9.81, hta_h, hta_f, rhs,
                                 std::nullopt, std::nullopt, sys);
    for (int i = 0; i + 1 < g.cells; ++i) {
      CHECK(std::abs(sys.upper[i] - sys.lower[i + 1]) <= 1e-13 * std::abs(sys.upper[i]));
    }
    for (int i = 0; i < g.cells; ++i) {
      CHECK(sys.diag[i] > 0.0);
      double offsum = 0.0;
      if (i > 0) offsum += std::abs(sys.lower[i]);
      if (i + 1 < g.cells) offsum += std::abs(sys.upper[i]);
      CHECK(sys.diag[i] >= offsum);
    }
  }
}

TEST_CASE("zero implicit weight freezes the surface") {
  const Grid1D g = build_grid(0.0, 1000.0, 20);
  std::vector<double> hta_h(g.edges(), 3.0), hta_f(g.edges(), 0.0);
  std::vector<double> rhs(g.cells);
  for (int i = 0; i < g.cells; ++i) rhs[i] = g.dx[i] * (2.0 + 0.1 * i);
  TridiagonalSystem sys;
  assemble_free_surface_system(g, 0.0, 9.81, hta_h, hta_f, rhs, std::nullopt,
                               std::nullopt, sys);
  const std::vector<double> eta = thomas_solve(sys);
  for (int i = 0; i < g.cells; ++i) {
    CHECK(eta[i] == doctest::Approx(2.0 + 0.1 * i).epsilon(1e-14));
  }
}

namespace {

PhysicsParams quiet_physics() {
  PhysicsParams p;
  p.cw = 0.0;
  p.u_wind = 0.0;
  return p;
}

State rest_state(const Grid1D& g, const LayerLayout& layout, std::mt19937& rng,
                 double level) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double b1 = dist(rng), b2 = dist(rng), p1 = dist(rng);
  auto bed = [&](double x) {
    const double t = (x - g.x_start) / (g.x_end - g.x_start);
    return 2.0 * (b1 * std::sin(2.0 * M_PI * t + p1) + b2 * std::cos(4.0 * M_PI * t));
  };
  return make_state(
      g, layout, [&](double) { return level; }, bed, [](double, int) { return 0.0; });
}

}  // namespace

TEST_CASE("well-balanced rest state for all steppers") {
  std::mt19937 rng(21);
  const Grid1D g = build_grid(0.0, 5000.0, 50);

  for (int trial = 0; trial < 3; ++trial) {
    const LayerLayout layout =
        trial == 0 ? uniform_layout(g, 1)
                   : (trial == 1 ? uniform_layout(g, 7) : split_layout(g, 8, 2));
    const PhysicsParams phys = quiet_physics();
    const double level = 10.0;

    for (int scheme = 0; scheme < 3; ++scheme) {
      State s = rest_state(g, layout, rng, level);
      StepperOptions opts;
      ThetaStepper theta(g, layout, phys, {}, 0.55, opts);
      ImexArk2Stepper imex(g, layout, phys, {}, opts);
      Rk3Stepper rk3(g, layout, phys, {}, 0.9, opts);
      for (int n = 0; n < 100; ++n) {
        if (scheme == 0) theta.step(s, 20.0);
        if (scheme == 1) imex.step(s, 20.0);
        if (scheme == 2) rk3.step(s, 1e9);
      }
      for (int i = 0; i < g.cells; ++i) {
        CHECK(std::abs(s.eta[i] - level) <= 1e-12);
      }
      for (double u : s.u) CHECK(std::abs(u) <= 1e-12);
    }
  }
}

TEST_CASE("closed basin conserves mass") {
  std::mt19937 rng(31);
  const Grid1D g = build_grid(0.0, 5000.0, 50);
  const LayerLayout layout = split_layout(g, 6, 3);
  const PhysicsParams phys = quiet_physics();

  auto total_mass = [&](const State& s) {
    double m = 0.0;
    for (int i = 0; i < g.cells; ++i) m += g.dx[i] * s.eta[i];
    return m;
  };

  auto initial = [&]() {
    return make_state(
        g, layout,
        [&](double x) { return 10.0 + 0.2 * std::sin(2.0 * M_PI * x / 5000.0); },
        [](double x) { return 1.5 * std::exp(-std::pow((x - 2500.0) / 600.0, 2)); },
        [](double, int) { return 0.0; });
  };
  (void)rng;

  SUBCASE("theta") {
    State s = initial();
    ThetaStepper stepper(g, layout, phys, {}, 0.55);
    const double m0 = total_mass(s);
    for (int n = 0; n < 300; ++n) stepper.step(s, 10.0);
    CHECK(std::abs(total_mass(s) - m0) <= 1e-10 * std::abs(m0));
  }
  SUBCASE("imex") {
    State s = initial();
    ImexArk2Stepper stepper(g, layout, phys, {});
    const double m0 = total_mass(s);
    for (int n = 0; n < 300; ++n) stepper.step(s, 10.0);
    CHECK(std::abs(total_mass(s) - m0) <= 1e-10 * std::abs(m0));
  }
  SUBCASE("rk3") {
    State s = initial();
    Rk3Stepper stepper(g, layout, phys, {}, 0.9);
    const double m0 = total_mass(s);
    for (int n = 0; n < 300; ++n) stepper.step(s, 1e9);
    CHECK(std::abs(total_mass(s) - m0) <= 1e-10 * std::abs(m0));
  }
}

TEST_CASE("theta step satisfies the discrete continuity identity") {
  const Grid1D g = build_grid(0.0, 5000.0, 50);
  const LayerLayout layout = uniform_layout(g, 5);
  const PhysicsParams phys = quiet_physics();
  const double theta = 0.55;
  const double dt = 10.0;

  State s = make_state(
      g, layout,
      [](double x) { return 10.0 + 0.3 * std::sin(2.0 * M_PI * x / 5000.0); },
      [](double) { return 0.0; }, [](double, int) { return 0.0; });

  EdgeFields before;
  compute_edge_fields(g, layout, {}, s, 0.0, phys.h_min, before);
  const State old = s;

  ThetaStepper stepper(g, layout, phys, {}, theta);
  stepper.step(s, dt);

  // flux at the new level with the frozen heights
  EdgeFields after = before;
  for (int e = 0; e <= g.cells; ++e) {
    const LayerScheme& scheme = layout.edge_scheme(e);
    double ubar = 0.0;
    for (int a = 0; a < scheme.count; ++a) {
      ubar += scheme.fractions[a] * s.u[layout.edge_offset(e) + a];
    }
    after.flux[e] = before.h[e] * ubar;
  }
  for (int i = 0; i < g.cells; ++i) {
    const double resid =
        g.dx[i] * (s.eta[i] - old.eta[i]) +
        dt * (theta * (after.flux[i + 1] - after.flux[i]) +
              (1.0 - theta) * (before.flux[i + 1] - before.flux[i]));
    CHECK(std::abs(resid) <= 1e-9);
  }
}

TEST_CASE("drying raises a solver error") {
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = uniform_layout(g, 2);
  State s = make_state(
      g, layout, [](double) { return 1e-9; }, [](double) { return 0.0; },
      [](double, int) { return 0.0; });
  ThetaStepper stepper(g, layout, quiet_physics(), {}, 0.55);
  CHECK_THROWS_AS(stepper.step(s, 1.0), DryingError);
}

TEST_CASE("theta outside [0,1] is rejected") {
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = uniform_layout(g, 2);
  CHECK_THROWS_AS(ThetaStepper(g, layout, quiet_physics(), {}, 1.5), ConfigError);
}
