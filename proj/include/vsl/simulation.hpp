// One live simulation instance: dynamics + actuator + disturbances + scripted
// timeline + display-only position hold. Advanced by a single owner.
#pragma once

#include <cstdint>

#include "vsl/actuator.hpp"
#include "vsl/disturbance.hpp"
#include "vsl/scenario.hpp"
#include "vsl/telemetry.hpp"

namespace vsl {

/// Step index at which an event stamped at t takes effect.
std::uint64_t event_step(double t, double dt);

class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  // Live commands; take effect from the next step on.
  void command_stiffness(double sigma);
  void set_payload(double m_p);
  void set_position_setpoint(double x, double y);
  void inject_impulse(Axis axis, double magnitude, double duration,
                      TorqueTarget target = TorqueTarget::tip);
  /// Back to the initial dynamic state; the clock keeps running.
  void reset();

  void advance();

  TelemetryRecord record() const;
  DisturbanceSample disturbance_now() const;
  std::size_t active_impulses() const;
  std::size_t active_sustained() const;

  std::uint64_t step_index() const { return step_; }
  std::uint64_t total_steps() const { return total_steps_; }
  bool finished() const { return step_ >= total_steps_; }
  double time() const { return static_cast<double>(step_) * scenario_.dt; }
  double dt() const { return scenario_.dt; }

  const SimState& state() const { return state_; }
  const StiffnessState& actuator() const { return actuator_; }
  const Scenario& scenario() const { return scenario_; }
  std::size_t validity_breaches() const { return breaches_; }

 private:
  void apply_due_events();
  DisturbanceSample sample(double t) const;

  Scenario scenario_;
  SimState state_;
  StiffnessState actuator_;
  DisturbanceSignal injected_;
  double x_sp_ = 0.0, y_sp_ = 0.0;
  double x_uav_ = 0.0, y_uav_ = 0.0;
  std::uint64_t step_ = 0;
  std::uint64_t total_steps_ = 0;
  std::size_t next_schedule_ = 0, next_payload_ = 0, next_setpoint_ = 0;
  std::size_t breaches_ = 0;
};

}  // namespace vsl
