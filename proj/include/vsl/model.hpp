// Coupled attitude / tip-pendulum dynamics of a quadrotor carrying a payload
// through a variable stiffness link. One instance of the equations per
// horizontal axis (roll, pitch); no cross-axis terms.
//
//   J th'' + (D_c + c_s) th' + (K_c + k_s) th = k_s a + c_s a' + tau_w
//   m l^2 a'' + (c_p + c_s) a' + (m g l + k_s) a = k_s th + c_s th' + tau_d
//
// with k_s = sigma k_max, c_s = sigma c_max.
#pragma once

#include <array>
#include <cstddef>

#include <Eigen/Core>

namespace vsl {

enum class Axis : std::size_t { x = 0, y = 1 };
inline constexpr std::size_t kAxes = 2;

struct ModelParams {
  double J_att = 0.35;  // kg m^2, per-axis inertia
  double K_c = 8.75;    // N m/rad, closed-loop attitude stiffness (K_c/J = 25 s^-2)
  double D_c = 3.5;     // N m s/rad (D_c/J = 10 s^-1)
  double m_p = 2.0;     // kg, tip payload mass
  double l = 1.0;       // m
  double g = 9.81;      // m/s^2
  double c_p = 0.05;    // N m s/rad
  double k_max = 200.0; // N m/rad
  double c_max = 5.0;   // N m s/rad
};

/// Throws DomainError naming the first violated invariant.
void validate(const ModelParams& params);

struct AxisState {
  double theta = 0.0;
  double theta_dot = 0.0;
  double alpha = 0.0;
  double alpha_dot = 0.0;

  bool operator==(const AxisState&) const = default;
};

struct SimState {
  double t = 0.0;
  std::array<AxisState, kAxes> axes{};
  double sigma = 0.0;
  double m_p_current = 2.0;
  /// False once any |angle| reached pi/2 on the latest step (small-angle model breach).
  bool in_envelope = true;

  AxisState& axis(Axis a) { return axes[static_cast<std::size_t>(a)]; }
  const AxisState& axis(Axis a) const { return axes[static_cast<std::size_t>(a)]; }
  bool operator==(const SimState&) const = default;
};

struct LinkStiffness {
  double k_s = 0.0;
  double c_s = 0.0;
};

struct DisturbanceSample {
  std::array<double, kAxes> tau_d{};  // tip torque
  std::array<double, kAxes> tau_w{};  // body torque
};

struct AxisDerivative {
  double theta_dot = 0.0;
  double theta_ddot = 0.0;
  double alpha_dot = 0.0;
  double alpha_ddot = 0.0;
};

/// Throws DomainError with the offending value if sigma is outside [0, 1].
void validate_sigma(double sigma);

/// Throws DomainError unless m >= 0 and finite.
void validate_payload_mass(double m);

/// k_s = sigma k_max, c_s = sigma c_max.
LinkStiffness blend_stiffness(double sigma, const ModelParams& params);

/// Torque the link applies to the UAV: -k_s (th - a) - c_s (th' - a').
double coupling_torque(const AxisState& axis, LinkStiffness link);

AxisDerivative axis_rhs(const AxisState& axis, LinkStiffness link, double m_p, double tau_d,
                        double tau_w, const ModelParams& params);

/// Both axes. Uses state.m_p_current for the tip mass; throws DegeneratePayloadError
/// when it is zero.
std::array<AxisDerivative, kAxes> dynamics_rhs(const SimState& state, double sigma,
                                               const DisturbanceSample& dist,
                                               const ModelParams& params);

using AxisVector = Eigen::Vector4d;  // [theta, theta_dot, alpha, alpha_dot]
using AxisMatrix = Eigen::Matrix4d;

AxisVector to_vector(const AxisState& axis);
AxisState from_vector(const AxisVector& v);

/// First-order state matrix of one axis for constant sigma, tip mass params.m_p.
AxisMatrix assemble_state_matrix(double sigma, const ModelParams& params);

/// Constant-forcing input column b so that x' = A x + b.
AxisVector forcing_vector(double tau_d, double tau_w, const ModelParams& params);

/// E = 1/2 J th'^2 + 1/2 K_c th^2 + 1/2 m l^2 a'^2 + 1/2 m g l a^2 + 1/2 k_s (th - a)^2
double mechanical_energy(const AxisState& axis, double k_s, double m_p, const ModelParams& params);

bool within_envelope(const AxisState& axis);

}  // namespace vsl
