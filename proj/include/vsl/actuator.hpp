// Cable-twisting stiffness actuator: motor under position control with a
// first-order velocity lag and a velocity limit. Stiffness fraction is the
// motor angle normalized by the full-twist angle.
#pragma once

#include <numbers>

#include "vsl/model.hpp"

namespace vsl {

struct ActuatorParams {
  double pos_rigid = 8.0 * std::numbers::pi;  // rad, full-twist angle (sigma = 1)
  double kp = 1.25;                           // 1/s, velocity command per rad of error
  double ki = 0.0;                            // 1/s^2
  double kd = 0.0;                            // dimensionless, on measured velocity
  double v_max = 3.393;                       // rad/s
  double tau = 0.2;                           // s, motor velocity lag
  double deadband = 0.0025;                   // rad, hold band around the setpoint
  double f_hold = 30.0;                       // N, internal tension at sigma = 1
};

void validate(const ActuatorParams& params);

/// Sigma preset used when full rigidity is unsafe.
inline constexpr double kReducedRigidSigma = 0.8;

struct StiffnessState {
  double sigma_target = 0.0;
  double sigma_measured = 0.0;
  double motor_pos = 0.0;
  double motor_vel = 0.0;
  double k_s = 0.0;
  double c_s = 0.0;
  double error_integral = 0.0;

  bool operator==(const StiffnessState&) const = default;
};

struct LoadCellSample {
  double t = 0.0;
  double force = 0.0;
};

/// Actuator resting at `sigma`.
StiffnessState make_stiffness_state(double sigma, const ActuatorParams& act, const ModelParams& link);

/// Latches a new target. Throws DomainError (same text as validate_sigma) when out of range.
StiffnessState command_stiffness(StiffnessState state, double target);

StiffnessState actuator_step(const StiffnessState& state, double dt, const ActuatorParams& act,
                             const ModelParams& link);

/// force = m g cos(a_x) cos(a_y) + F_hold sigma_measured. Display model only.
LoadCellSample load_cell_reading(const SimState& sim, const StiffnessState& stiff,
                                 const ModelParams& params, const ActuatorParams& act);

}  // namespace vsl
