// Scenario documents (YAML, schema_version 1). See docs/scenario_schema.md.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vsl/actuator.hpp"
#include "vsl/disturbance.hpp"
#include "vsl/model.hpp"

namespace YAML {
class Node;
}

namespace vsl {

inline constexpr int kScenarioSchemaVersion = 1;
/// Lumped tip mass of the bare link, used whenever a document asks for zero payload.
inline constexpr double kResidualTipMass = 0.3;

struct StiffnessCommand {
  double t = 0.0;
  double sigma_target = 0.0;
};

enum class PayloadLabel { none, pickup, release };

struct PayloadEvent {
  double t = 0.0;
  double new_m_p = 0.0;
  PayloadLabel label = PayloadLabel::none;
};

struct PositionSetpoint {
  double t = 0.0;
  double x = 0.0;
  double y = 0.0;
};

struct AnalysisWindow {
  std::string label;
  double t0 = 0.0;
  double t1 = 0.0;
};

struct Scenario {
  std::string name;
  double duration = 0.0;
  double dt = 1e-3;
  int decimate = 1;
  double initial_sigma = 0.0;
  std::array<AxisState, kAxes> initial_state{};
  ModelParams params;
  ActuatorParams actuator;
  double position_tau = 1.5;  // s, display-only position-hold filter
  std::vector<StiffnessCommand> stiffness_schedule;
  std::vector<PayloadEvent> payload_events;
  std::vector<PositionSetpoint> position_setpoints;
  DisturbanceSignal disturbances;
  std::vector<AnalysisWindow> windows;
};

/// Parses and validates. SchemaError for structural problems (field + line:col),
/// ValidationError for semantic ones.
Scenario load_scenario(std::string_view document, const std::string& source = "<string>");
Scenario load_scenario_file(const std::filesystem::path& path);

/// Parsed document tree, for overrides and sweeps before validation.
YAML::Node parse_document(std::string_view document, const std::string& source = "<string>");
YAML::Node read_document(const std::filesystem::path& path);
Scenario scenario_from_node(const YAML::Node& root, const std::string& source = "<string>");

/// Patches `key=value` into the tree. Dotted path, numeric segments index lists;
/// the value is parsed as YAML. Throws SchemaError on an impossible path.
void apply_override(YAML::Node& root, std::string_view assignment);
void set_path(YAML::Node& root, std::string_view path, const YAML::Node& value);

/// `sigma` is a pseudo-path: constant stiffness from t = 0.
void set_constant_sigma(YAML::Node& root, double sigma);

std::string to_string(PayloadLabel label);
std::string to_string(Axis axis);
std::string to_string(TorqueTarget target);

}  // namespace vsl
