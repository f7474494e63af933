#include <string>

#include <yaml-cpp/yaml.h>

#include "doctest.h"
#include "vsl/errors.hpp"
#include "vsl/scenario.hpp"

using namespace vsl;

namespace {

const std::string kDir = VSL_SCENARIO_DIR;
const std::string kHead = "schema_version: 1\nname: s\nduration: 10\ndt: 0.001\n";

}  // namespace

TEST_CASE("minimal document takes defaults") {
  const auto s = load_scenario(kHead);
  CHECK(s.name == "s");
  CHECK(s.duration == 10.0);
  CHECK(s.decimate == 1);
  CHECK(s.initial_sigma == 0.0);
  CHECK(s.params.m_p == ModelParams{}.m_p);
  CHECK(s.stiffness_schedule.empty());
  REQUIRE(s.windows.size() == 1);
  CHECK(s.windows[0].label == "full");
  CHECK(s.windows[0].t1 == 10.0);
}

TEST_CASE("bundled fixtures load") {
  for (const char* name : {"minimal", "hover_impacts", "fan_test", "pickplace_flex", "pickplace_combined",
                           "pickplace_licas_flex", "pickplace_licas_combined", "teleop_demo"}) {
    CAPTURE(name);
    const auto s = load_scenario_file(kDir + "/" + name + ".scenario");
    CHECK(s.name == name);
  }
}

TEST_CASE("hover_impacts fixture shape") {
  const auto s = load_scenario_file(kDir + "/hover_impacts.scenario");
  CHECK(s.duration == 60.0);
  CHECK(s.disturbances.impulses().size() == 6);
  REQUIRE(s.stiffness_schedule.size() == 3);
  CHECK(s.stiffness_schedule[1].sigma_target == 1.0);
  CHECK(s.stiffness_schedule[2].sigma_target == 0.0);
}

TEST_CASE("arm payload fixtures use the 2 kg baseline and a 0.6 kg box") {
  const auto s = load_scenario_file(kDir + "/pickplace_licas_combined.scenario");
  CHECK(s.params.m_p == 2.0);
  REQUIRE(s.payload_events.size() == 2);
  CHECK(s.payload_events[0].new_m_p == doctest::Approx(2.6));
  CHECK(s.payload_events[0].label == PayloadLabel::pickup);
  CHECK(s.payload_events[1].new_m_p == 2.0);
  CHECK(s.payload_events[1].label == PayloadLabel::release);
}

TEST_CASE("zero payload maps to the residual tip mass") {
  const auto s = load_scenario(kHead + "params: {m_p: 0}\npayload_events: [{t: 1, m_p: 0}]\n");
  CHECK(s.params.m_p == kResidualTipMass);
  CHECK(s.payload_events[0].new_m_p == kResidualTipMass);
}

TEST_CASE("missing required fields are named with their location") {
  try {
    load_scenario("schema_version: 1\nname: s\ndt: 0.001\n", "doc.scenario");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "duration");
    CHECK(std::string(e.what()).find("doc.scenario:1:1") != std::string::npos);
  }
  CHECK_THROWS_AS(load_scenario("name: s\nduration: 1\ndt: 0.001\n"), SchemaError);
}

TEST_CASE("unknown fields are rejected") {
  try {
    load_scenario(kHead + "params:\n  k_maxx: 3\n", "doc");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.field() == "params.k_maxx");
    CHECK(e.location() == "doc:6:3");
  }
  CHECK_THROWS_AS(load_scenario(kHead + "colour: red\n"), SchemaError);
}

TEST_CASE("wrong types and versions") {
  CHECK_THROWS_WITH_AS(load_scenario(kHead + "initial_sigma: high\n"), doctest::Contains("initial_sigma"),
                       SchemaError);
  CHECK_THROWS_AS(load_scenario("schema_version: 2\nname: s\nduration: 10\ndt: 0.001\n"), SchemaError);
  CHECK_THROWS_AS(load_scenario(kHead + "stiffness_schedule: {t: 0}\n"), SchemaError);
  CHECK_THROWS_AS(load_scenario(kHead + "disturbances:\n  impulses: [{t: 1, magnitude: 1, axis: z}]\n"),
                  SchemaError);
  CHECK_THROWS_AS(load_scenario("{unbalanced: [\n"), SchemaError);
  CHECK_THROWS_AS(load_scenario(""), SchemaError);
}

TEST_CASE("semantic checks name the offending entry") {
  CHECK_THROWS_WITH_AS(load_scenario_file(std::string(VSL_TEST_DATA_DIR) + "/bad.scenario"),
                       doctest::Contains("stiffness_schedule[1].sigma"), ValidationError);
  CHECK_THROWS_WITH_AS(load_scenario(kHead + "stiffness_schedule: [{t: 5, sigma: 1}, {t: 2, sigma: 0}]\n"),
                       doctest::Contains("stiffness_schedule[1].t"), ValidationError);
  CHECK_THROWS_AS(load_scenario(kHead + "stiffness_schedule: [{t: 11, sigma: 1}]\n"), ValidationError);
  CHECK_THROWS_WITH_AS(load_scenario(kHead + "payload_events: [{t: 1, m_p: -2}]\n"),
                       doctest::Contains("payload_events[0].m_p"), ValidationError);
  CHECK_THROWS_AS(load_scenario("schema_version: 1\nname: s\nduration: 10\ndt: 0.5\n"), ValidationError);
  CHECK_THROWS_AS(load_scenario(kHead + "decimate: 0\n"), ValidationError);
  CHECK_THROWS_AS(load_scenario(kHead + "params: {J_att: -1}\n"), ValidationError);
  CHECK_THROWS_AS(load_scenario(kHead + "disturbances:\n  impulses: [{t: 2, magnitude: 1}, {t: 1, magnitude: 1}]\n"),
                  ValidationError);
}

TEST_CASE("windows must be ordered, disjoint and uniquely labelled") {
  CHECK_NOTHROW(load_scenario(kHead + "windows: [{label: a, t0: 0, t1: 5}, {label: b, t0: 5, t1: 10}]\n"));
  CHECK_THROWS_AS(load_scenario(kHead + "windows: [{label: a, t0: 0, t1: 6}, {label: b, t0: 5, t1: 10}]\n"),
                  ValidationError);
  CHECK_THROWS_AS(load_scenario(kHead + "windows: [{label: a, t0: 0, t1: 5}, {label: a, t0: 5, t1: 10}]\n"),
                  ValidationError);
  CHECK_THROWS_AS(load_scenario(kHead + "windows: [{label: a, t0: 3, t1: 3}]\n"), ValidationError);
}

TEST_CASE("windows derived from schedule segments") {
  const auto s = load_scenario(kHead + "stiffness_schedule: [{t: 0, sigma: 0}, {t: 4, sigma: 1}]\n");
  REQUIRE(s.windows.size() == 2);
  CHECK(s.windows[0].t0 == 0.0);
  CHECK(s.windows[0].t1 == 4.0);
  CHECK(s.windows[1].t1 == 10.0);
  CHECK(s.windows[0].label != s.windows[1].label);
}

TEST_CASE("overrides patch nested fields and list entries") {
  YAML::Node root = parse_document(kHead + "stiffness_schedule: [{t: 0, sigma: 0}, {t: 4, sigma: 1}]\n");
  apply_override(root, "params.k_max=400");
  apply_override(root, "stiffness_schedule.1.sigma=0.5");
  apply_override(root, "name=renamed");
  const auto s = scenario_from_node(root);
  CHECK(s.params.k_max == 400.0);
  CHECK(s.stiffness_schedule[1].sigma_target == 0.5);
  CHECK(s.name == "renamed");
}

TEST_CASE("override errors") {
  YAML::Node root = parse_document(kHead);
  CHECK_THROWS_AS(apply_override(root, "params.k_max"), SchemaError);
  CHECK_THROWS_AS(apply_override(root, "=3"), SchemaError);
  CHECK_THROWS_AS(apply_override(root, "params..k=3"), SchemaError);
  CHECK_THROWS_AS(apply_override(root, "name.inner=3"), SchemaError);
  CHECK_THROWS_AS(apply_override(root, "sigma=soft"), SchemaError);
  YAML::Node list = parse_document(kHead + "stiffness_schedule: [{t: 0, sigma: 0}]\n");
  CHECK_THROWS_AS(apply_override(list, "stiffness_schedule.3.sigma=1"), SchemaError);
  // A new unknown key is caught by the schema, not silently ignored.
  YAML::Node typo = parse_document(kHead);
  apply_override(typo, "params.kmax=3");
  CHECK_THROWS_AS(scenario_from_node(typo), SchemaError);
}

TEST_CASE("constant sigma override replaces the schedule") {
  YAML::Node root = read_document(kDir + "/fan_test.scenario");
  set_constant_sigma(root, 0.25);
  const auto s = scenario_from_node(root);
  CHECK(s.initial_sigma == 0.25);
  REQUIRE(s.stiffness_schedule.size() == 1);
  CHECK(s.stiffness_schedule[0].t == 0.0);
  CHECK(s.stiffness_schedule[0].sigma_target == 0.25);
  CHECK(s.windows.size() == 3);
  YAML::Node again = read_document(kDir + "/fan_test.scenario");
  apply_override(again, "sigma=0.25");
  CHECK(scenario_from_node(again).initial_sigma == 0.25);
}

TEST_CASE("missing file is an I/O error") {
  CHECK_THROWS_AS(load_scenario_file("/nonexistent/x.scenario"), IoError);
}

TEST_CASE("enum printing") {
  CHECK(to_string(Axis::y) == "y");
  CHECK(to_string(TorqueTarget::body) == "body");
  CHECK(to_string(PayloadLabel::pickup) == "pickup");
}
