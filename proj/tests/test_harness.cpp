#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mlswe/errors.hpp"
#include "mlswe/metrics.hpp"
#include "mlswe/runner.hpp"
#include "mlswe/scenario.hpp"
#include "test_util.hpp"

using namespace mlswe;
using namespace mlswe::testing;

TEST_CASE("scenario defaults match the published setups") {
  const ScenarioConfig fo = build_scenario("free_oscillations");
  CHECK(bathymetry_at(fo, 5000.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(fo.eta_slope == doctest::Approx(1.0e-4).epsilon(1e-14));
  CHECK(fo.cells == 200);
  CHECK((fo.x_end - fo.x_start) / fo.cells == doctest::Approx(50.0));

  const ScenarioConfig sp = build_scenario("subcritical_peak");
  CHECK(bathymetry_at(sp, 0.0) == doctest::Approx(2.05).epsilon(1e-14));
  CHECK(bathymetry_at(sp, 10.0) == doctest::Approx(0.05 - 0.01).epsilon(1e-12));
  CHECK(sp.bc.left.q0 == doctest::Approx(4.42));

  const ScenarioConfig tf = build_scenario("tidal_forcing");
  CHECK(bathymetry_at(tf, 16000.0) == doctest::Approx(70.3034).epsilon(1e-4));
  CHECK(tf.bc.right.eta_amplitude == doctest::Approx(3.0));
  CHECK(tf.bc.right.eta_omega == doctest::Approx(2.0 * M_PI / 43200.0).epsilon(1e-14));

  const ScenarioConfig sd = build_scenario("sediment_dune");
  CHECK(bathymetry_at(sd, 400.0) == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(bathymetry_at(sd, 200.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(sd.physics.grass_ag == doctest::Approx(0.001));
  CHECK(sd.physics.porosity == doctest::Approx(0.4));

  CHECK_THROWS_AS(build_scenario("does_not_exist"), ConfigError);
}

TEST_CASE("error report on identical and uniformly shifted states") {
  const Grid1D g = build_grid(0.0, 100.0, 10);
  const LayerLayout layout = uniform_layout(g, 3);
  const State ref = make_state(
      g, layout, [](double) { return 5.0; }, [](double) { return 0.0; },
      [](double, int) { return 1.0; });

  const ErrorReport zero = compute_errors(g, layout, ref, ref);
  CHECK(zero.eta_l2 == 0.0);
  CHECK(zero.u_l2 == 0.0);
  CHECK(zero.u_linf == 0.0);
  CHECK(zero.bed_l2 == 0.0);

  State shifted = ref;
  const double eps = 1e-6;
  for (double& u : shifted.u) u += eps;
  const ErrorReport rep = compute_errors(g, layout, shifted, ref);
  CHECK(rep.u_l2 == doctest::Approx(eps).epsilon(1e-10));
  CHECK(rep.u_linf == doctest::Approx(eps).epsilon(1e-10));
}

TEST_CASE("config file parsing with overrides") {
  const std::string path = "test_config.ini";
  {
    std::ofstream out(path);
    out << "# comment line\n"
        << "[run]\n"
        << "scenario = free_oscillations\n"
        << "tracer = on\n"
        << "[time]\n"
        << "dt = 12.5\n"
        << "scheme = imex\n"
        << "snapshots = 100, 200\n"
        << "[layers]\n"
        << "region = 0 10000 1\n"
        << "region = 0 5000 10\n";
  }
  const ScenarioConfig cfg = parse_config_file(path);
  std::remove(path.c_str());

  CHECK(cfg.name == "free_oscillations");
  CHECK(cfg.dt == doctest::Approx(12.5));
  CHECK(cfg.scheme == SchemeKind::ImexArk2);
  CHECK(cfg.tracer);
  REQUIRE(cfg.snapshots.size() == 2);
  CHECK(cfg.snapshots[1] == doctest::Approx(200.0));
  REQUIRE(cfg.layer_regions.size() == 2);  // the file replaced the default region

  const Simulation sim(cfg);
  CHECK(sim.dof() == 1310);

  CHECK_THROWS_AS(parse_config_file("missing_file.ini"), ConfigError);
  CHECK_THROWS_AS(apply_override(const_cast<ScenarioConfig&>(cfg), "no.such", "1"),
                  ConfigError);
}

TEST_CASE("layer spec strings") {
  const std::vector<LayerRegion> regions = parse_layer_spec("0:10000:1;0:5000:10");
  REQUIRE(regions.size() == 2);
  CHECK(regions[0].layers == 1);
  CHECK(regions[1].x_hi == doctest::Approx(5000.0));

  const std::vector<LayerRegion> weighted =
      parse_layer_spec("0:1:3:0.2,0.3,0.5");
  REQUIRE(weighted.size() == 1);
  REQUIRE(weighted[0].fractions.size() == 3);
  CHECK(weighted[0].fractions[2] == doctest::Approx(0.5));

  CHECK_THROWS_AS(parse_layer_spec("0:1"), ConfigError);
}

TEST_CASE("runner writes deterministic snapshots and metrics") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mlswe_runner_test";
  fs::remove_all(dir);

  ScenarioConfig cfg = build_scenario("free_oscillations");
  cfg.t_final = 100.0;
  cfg.snapshots = {50.0, 100.0};
  cfg.dt = 25.0;
  cfg.out_dir = (dir / "a").string();
  const RunResult first = run_scenario(cfg);
  REQUIRE(first.snapshots.size() == 2);
  CHECK(first.dof == 2210);

  cfg.out_dir = (dir / "b").string();
  run_scenario(cfg);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const char* name : {"snapshot_000.csv", "snapshot_001.csv"}) {
    CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));
  }

  // csv header carries the layered columns
  const std::string csv = slurp(dir / "a" / "snapshot_000.csv");
  CHECK(csv.rfind("x,eta,b,h,u_1", 0) == 0);
  CHECK(csv.find("w_11") != std::string::npos);

  // state round trip
  const State back = read_state_file((dir / "a" / "snapshot_001.state").string());
  CHECK(back.time == doctest::Approx(100.0));
  CHECK(back.eta.size() == first.snapshots[1].second.eta.size());
  CHECK(back.u == first.snapshots[1].second.u);

  // reference errors vanish against the identical run
  cfg.out_dir = (dir / "c").string();
  cfg.reference_dir = (dir / "a").string();
  const RunResult res = run_scenario(cfg);
  bool found = false;
  for (const auto& [key, value] : res.metrics) {
    if (key == "err_eta_l2") {
      CHECK(std::stod(value) == 0.0);
      found = true;
    }
  }
  CHECK(found);

  fs::remove_all(dir);
}

TEST_CASE("snapshot truncation lands runs on the requested times") {
  ScenarioConfig cfg = build_scenario("free_oscillations");
  cfg.dt = 7.3;  // does not divide the horizon
  cfg.t_final = 50.0;
  cfg.snapshots = {50.0};
  const RunResult res = run_scenario(cfg);
  CHECK(res.snapshots[0].second.time == doctest::Approx(50.0).epsilon(1e-12));

  // a dt longer than the horizon is truncated into a single step
  cfg.dt = 500.0;
  const RunResult one = run_scenario(cfg);
  CHECK(one.snapshots[0].second.time == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("profile files round trip") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "mlswe_profile_test.txt";
  const std::vector<double> shape = {1.25, 0.875, 1.0 / 3.0};
  write_profile(path.string(), shape);
  const std::vector<double> back = read_profile(path.string());
  REQUIRE(back.size() == shape.size());
  for (std::size_t k = 0; k < shape.size(); ++k) {
    CHECK(back[k] == shape[k]);  // 17 digits round-trip exactly
  }
  fs::remove(path);
}
