#include "vsl/simulation.hpp"

#include <cmath>

#include "vsl/errors.hpp"
#include "vsl/integrator.hpp"

namespace vsl {

std::uint64_t event_step(double t, double dt) {
  const double n = std::ceil(t / dt - 1e-9);
  return n <= 0.0 ? 0 : static_cast<std::uint64_t>(n);
}

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario)) {
  validate(scenario_.params);
  validate(scenario_.actuator);
  validate_dt(scenario_.dt);
  total_steps_ = static_cast<std::uint64_t>(std::llround(scenario_.duration / scenario_.dt));
  reset();
  apply_due_events();
}

void Simulation::reset() {
  state_ = SimState{};
  state_.t = time();
  state_.axes = scenario_.initial_state;
  state_.m_p_current = scenario_.params.m_p;
  state_.in_envelope = within_envelope(state_.axes[0]) && within_envelope(state_.axes[1]);
  actuator_ = make_stiffness_state(scenario_.initial_sigma, scenario_.actuator, scenario_.params);
  state_.sigma = actuator_.sigma_measured;
  injected_ = DisturbanceSignal{};
  x_uav_ = y_uav_ = 0.0;
  x_sp_ = y_sp_ = 0.0;
  // Scripted timeline entries already in the past stay in effect.
  for (std::size_t i = 0; i < next_schedule_; ++i) {
    actuator_ = vsl::command_stiffness(actuator_, scenario_.stiffness_schedule[i].sigma_target);
  }
  for (std::size_t i = 0; i < next_payload_; ++i) state_.m_p_current = scenario_.payload_events[i].new_m_p;
  for (std::size_t i = 0; i < next_setpoint_; ++i) {
    x_sp_ = scenario_.position_setpoints[i].x;
    y_sp_ = scenario_.position_setpoints[i].y;
  }
}

void Simulation::command_stiffness(double sigma) { actuator_ = vsl::command_stiffness(actuator_, sigma); }

void Simulation::set_payload(double m_p) {
  validate_payload_mass(m_p);
  state_.m_p_current = m_p == 0.0 ? kResidualTipMass : m_p;
}

void Simulation::set_position_setpoint(double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw DomainError("position setpoint must be finite");
  x_sp_ = x;
  y_sp_ = y;
}

void Simulation::inject_impulse(Axis axis, double magnitude, double duration, TorqueTarget target) {
  validate_impulse(magnitude, duration);
  std::vector<ImpulseEvent> imp = injected_.impulses();
  // Drop pulses that are over; they no longer contribute.
  std::erase_if(imp, [&](const ImpulseEvent& e) { return e.t_start + e.duration < time(); });
  imp.push_back({time(), duration, magnitude, axis, target});
  injected_ = DisturbanceSignal(std::move(imp), {}, 0);
}

DisturbanceSample Simulation::sample(double t) const {
  DisturbanceSample s = scenario_.disturbances.sample(t);
  if (!injected_.impulses().empty()) {
    const DisturbanceSample extra = injected_.sample(t);
    for (std::size_t i = 0; i < kAxes; ++i) {
      s.tau_d[i] += extra.tau_d[i];
      s.tau_w[i] += extra.tau_w[i];
    }
  }
  return s;
}

DisturbanceSample Simulation::disturbance_now() const { return sample(time()); }

std::size_t Simulation::active_impulses() const {
  return scenario_.disturbances.active_impulses(time()) + injected_.active_impulses(time());
}

std::size_t Simulation::active_sustained() const { return scenario_.disturbances.active_sustained(time()); }

void Simulation::apply_due_events() {
  const double dt = scenario_.dt;
  const auto& sched = scenario_.stiffness_schedule;
  while (next_schedule_ < sched.size() && event_step(sched[next_schedule_].t, dt) <= step_) {
    actuator_ = vsl::command_stiffness(actuator_, sched[next_schedule_].sigma_target);
    ++next_schedule_;
  }
  const auto& pay = scenario_.payload_events;
  while (next_payload_ < pay.size() && event_step(pay[next_payload_].t, dt) <= step_) {
    state_.m_p_current = pay[next_payload_].new_m_p;
    ++next_payload_;
  }
  const auto& sp = scenario_.position_setpoints;
  while (next_setpoint_ < sp.size() && event_step(sp[next_setpoint_].t, dt) <= step_) {
    x_sp_ = sp[next_setpoint_].x;
    y_sp_ = sp[next_setpoint_].y;
    ++next_setpoint_;
  }
}

void Simulation::advance() {
  const double dt = scenario_.dt;
  state_.t = time();
  const double sigma = actuator_.sigma_measured;
  state_ = step(state_, dt, sigma, [this](double t) { return sample(t); }, scenario_.params);
  actuator_ = actuator_step(actuator_, dt, scenario_.actuator, scenario_.params);

  const double blend = 1.0 - std::exp(-dt / scenario_.position_tau);
  x_uav_ += (x_sp_ - x_uav_) * blend;
  y_uav_ += (y_sp_ - y_uav_) * blend;

  ++step_;
  state_.t = time();
  if (!state_.in_envelope) ++breaches_;
  apply_due_events();
}

TelemetryRecord Simulation::record() const {
  TelemetryRecord r;
  r.t = time();
  for (std::size_t i = 0; i < kAxes; ++i) {
    r.theta[i] = state_.axes[i].theta;
    r.alpha[i] = state_.axes[i].alpha;
    r.theta_dot[i] = state_.axes[i].theta_dot;
    r.alpha_dot[i] = state_.axes[i].alpha_dot;
  }
  r.sigma_target = actuator_.sigma_target;
  r.sigma_measured = actuator_.sigma_measured;
  r.k_s = actuator_.k_s;
  r.c_s = actuator_.c_s;
  const DisturbanceSample d = disturbance_now();
  r.tau_d = d.tau_d;
  r.tau_w = d.tau_w;
  SimState at = state_;
  at.t = r.t;
  r.load_cell = load_cell_reading(at, actuator_, scenario_.params, scenario_.actuator).force;
  r.m_p = state_.m_p_current;
  r.x_uav = x_uav_;
  r.y_uav = y_uav_;
  const double l = scenario_.params.l;
  r.x_tip = x_uav_ + l * std::sin(state_.axes[0].alpha);
  r.y_tip = y_uav_ + l * std::sin(state_.axes[1].alpha);
  r.valid = state_.in_envelope;
  return r;
}

}  // namespace vsl
