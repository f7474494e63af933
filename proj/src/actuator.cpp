#include "vsl/actuator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vsl/errors.hpp"

namespace vsl {

void validate(const ActuatorParams& a) {
  auto require = [](bool ok, const char* what, double v) {
    if (!ok) {
      std::ostringstream msg;
      msg << what << " (got " << v << ")";
      throw DomainError(msg.str());
    }
  };
  require(a.pos_rigid > 0.0, "actuator.pos_rigid must be > 0", a.pos_rigid);
  require(a.kp > 0.0, "actuator.kp must be > 0", a.kp);
  require(a.ki >= 0.0, "actuator.ki must be >= 0", a.ki);
  require(a.kd >= 0.0, "actuator.kd must be >= 0", a.kd);
  require(a.v_max > 0.0, "actuator.v_max must be > 0", a.v_max);
  require(a.tau > 0.0, "actuator.tau must be > 0", a.tau);
  require(a.deadband >= 0.0, "actuator.deadband must be >= 0", a.deadband);
  require(a.f_hold >= 0.0, "actuator.f_hold must be >= 0", a.f_hold);
}

namespace {

StiffnessState with_measurement(StiffnessState s, const ActuatorParams& act, const ModelParams& link) {
  s.sigma_measured = std::clamp(s.motor_pos / act.pos_rigid, 0.0, 1.0);
  const LinkStiffness ks = blend_stiffness(s.sigma_measured, link);
  s.k_s = ks.k_s;
  s.c_s = ks.c_s;
  return s;
}

}  // namespace

StiffnessState make_stiffness_state(double sigma, const ActuatorParams& act, const ModelParams& link) {
  validate_sigma(sigma);
  StiffnessState s;
  s.sigma_target = sigma;
  s.motor_pos = sigma * act.pos_rigid;
  return with_measurement(s, act, link);
}

StiffnessState command_stiffness(StiffnessState state, double target) {
  validate_sigma(target);
  state.sigma_target = target;
  return state;
}

StiffnessState actuator_step(const StiffnessState& state, double dt, const ActuatorParams& act,
                             const ModelParams& link) {
  StiffnessState s = state;
  const double setpoint = s.sigma_target * act.pos_rigid;
  const double error = setpoint - s.motor_pos;

  if (std::abs(error) <= act.deadband) {
    // Holding: lock onto the setpoint so endpoints are exact.
    s.motor_pos = setpoint;
    s.motor_vel = 0.0;
    s.error_integral = 0.0;
    return with_measurement(s, act, link);
  }

  const double raw = act.kp * error + act.ki * s.error_integral - act.kd * s.motor_vel;
  const double command = std::clamp(raw, -act.v_max, act.v_max);
  if (command == raw) s.error_integral += error * dt;  // no windup while saturated

  s.motor_vel += (command - s.motor_vel) * (1.0 - std::exp(-dt / act.tau));
  s.motor_pos = std::clamp(s.motor_pos + s.motor_vel * dt, 0.0, act.pos_rigid);
  if (s.motor_pos == 0.0 || s.motor_pos == act.pos_rigid) {
    // Hard stop; kill velocity pushing into it.
    if ((s.motor_pos == 0.0 && s.motor_vel < 0.0) || (s.motor_pos == act.pos_rigid && s.motor_vel > 0.0)) {
      s.motor_vel = 0.0;
    }
  }
  return with_measurement(s, act, link);
}

LoadCellSample load_cell_reading(const SimState& sim, const StiffnessState& stiff,
                                 const ModelParams& params, const ActuatorParams& act) {
  const double weight = sim.m_p_current * params.g * std::cos(sim.axes[0].alpha) *
                        std::cos(sim.axes[1].alpha);
  return {sim.t, weight + act.f_hold * stiff.sigma_measured};
}

}  // namespace vsl
