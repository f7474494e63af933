#include <string>

#include <yaml-cpp/yaml.h>

#include "doctest.h"
#include "vsl/errors.hpp"
#include "vsl/sweep.hpp"

using namespace vsl;

namespace {

const std::string kDir = VSL_SCENARIO_DIR;

YAML::Node fan() { return read_document(kDir + "/fan_test.scenario"); }

}  // namespace

TEST_CASE("expand over sigma") {
  const auto pts = expand_sweep(fan(), "sigma", {0.0, 0.5, 1.0}, "fan");
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].value == 0.5);
  CHECK(pts[1].scenario.initial_sigma == 0.5);
  CHECK(pts[2].scenario.stiffness_schedule.back().sigma_target == 1.0);
}

TEST_CASE("expand over a parameter path") {
  const auto pts = expand_sweep(fan(), "params.k_max", {30.0, 400.0}, "fan");
  CHECK(pts[0].scenario.params.k_max == 30.0);
  CHECK(pts[1].scenario.params.k_max == 400.0);
  CHECK(pts[1].scenario.params.m_p == 0.5);
}

TEST_CASE("invalid sweeps") {
  CHECK_THROWS_AS(expand_sweep(fan(), "params.bogus", {1.0}, "fan"), SchemaError);
  CHECK_THROWS_AS(expand_sweep(fan(), "sigma", {}, "fan"), ValidationError);
  CHECK_THROWS_AS(expand_sweep(fan(), "sigma", {2.0}, "fan"), ValidationError);
}

TEST_CASE("parallel batch is bit-identical to the serial reference") {
  const auto pts = expand_sweep(fan(), "sigma", {0.0, 0.25, 0.5, 0.75, 1.0}, "fan");
  std::vector<Scenario> sc;
  for (const auto& p : pts) sc.push_back(p.scenario);
  const auto serial = run_batch_serial(sc);
  for (const int threads : {0, 1, 3}) {
    const auto parallel = run_batch_parallel(sc, threads);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(parallel[i].records == serial[i].records);
      CHECK(summary_yaml(parallel[i].summary) == summary_yaml(serial[i].summary));
    }
  }
}

TEST_CASE("parallel modal batch matches serial") {
  std::vector<ModelParams> ps(7);
  for (std::size_t i = 0; i < ps.size(); ++i) ps[i].k_max = 20.0 + 50.0 * i;
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  const auto a = modal_batch_serial(ps, grid);
  const auto b = modal_batch_parallel(ps, grid, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      CHECK(a[i][j].eigenvalues == b[i][j].eigenvalues);
      CHECK(a[i][j].undamped_omega == b[i][j].undamped_omega);
    }
  }
}

TEST_CASE("errors inside a parallel batch surface to the caller") {
  auto s = load_scenario_file(kDir + "/minimal.scenario");
  std::vector<Scenario> sc{s, s};
  sc[1].params.m_p = -1.0;
  CHECK_THROWS_AS(run_batch_parallel(sc, 2), DomainError);
  CHECK_THROWS_AS(run_batch_serial(sc), DomainError);
}

TEST_CASE("singleton sweep equals a plain run") {
  const auto pts = expand_sweep(fan(), "params.k_max", {30.0}, "fan");
  const auto res = run_batch_parallel({pts[0].scenario});
  CHECK(telemetry_csv(res[0].records) == telemetry_csv(run(load_scenario_file(kDir + "/fan_test.scenario")).records));
}

TEST_CASE("sweep table has one row per point and window") {
  const auto pts = expand_sweep(fan(), "sigma", {0.0, 1.0}, "fan");
  std::vector<Scenario> sc;
  for (const auto& p : pts) sc.push_back(p.scenario);
  const std::string csv = sweep_csv("sigma", pts, run_batch_serial(sc));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 3);
  CHECK(csv.find("\n1,sigma,1.000000,rigid_phase,") != std::string::npos);
}
