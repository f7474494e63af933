#include "vsl/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "vsl/errors.hpp"

namespace vsl {
namespace {

void require(bool ok, const char* what, double value) {
  if (!ok) {
    std::ostringstream msg;
    msg << what << " (got " << value << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

void validate(const ModelParams& p) {
  require(std::isfinite(p.J_att) && p.J_att > 0.0, "params.J_att must be > 0", p.J_att);
  require(std::isfinite(p.K_c) && p.K_c > 0.0, "params.K_c must be > 0", p.K_c);
  require(std::isfinite(p.D_c) && p.D_c >= 0.0, "params.D_c must be >= 0", p.D_c);
  require(std::isfinite(p.m_p) && p.m_p >= 0.0, "params.m_p must be >= 0", p.m_p);
  require(std::isfinite(p.l) && p.l > 0.0, "params.l must be > 0", p.l);
  require(std::isfinite(p.g) && p.g > 0.0, "params.g must be > 0", p.g);
  require(std::isfinite(p.c_p) && p.c_p >= 0.0, "params.c_p must be >= 0", p.c_p);
  require(std::isfinite(p.k_max) && p.k_max >= 0.0, "params.k_max must be >= 0", p.k_max);
  require(std::isfinite(p.c_max) && p.c_max >= 0.0, "params.c_max must be >= 0", p.c_max);
}

void validate_sigma(double sigma) {
  if (!(sigma >= 0.0 && sigma <= 1.0)) {
    std::ostringstream msg;
    msg << "sigma out of [0,1]: " << sigma;
    throw DomainError(msg.str());
  }
}

void validate_payload_mass(double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    std::ostringstream msg;
    msg << "mass must be >= 0 (got " << m << ")";
    throw DomainError(msg.str());
  }
}

LinkStiffness blend_stiffness(double sigma, const ModelParams& params) {
  validate_sigma(sigma);
  return {sigma * params.k_max, sigma * params.c_max};
}

double coupling_torque(const AxisState& axis, LinkStiffness link) {
  return -link.k_s * (axis.theta - axis.alpha) - link.c_s * (axis.theta_dot - axis.alpha_dot);
}

AxisDerivative axis_rhs(const AxisState& s, LinkStiffness link, double m_p, double tau_d,
                        double tau_w, const ModelParams& p) {
  if (!(m_p > 0.0)) {
    throw DegeneratePayloadError("degenerate payload: tip mass must be > 0 (got " +
                                 std::to_string(m_p) + ")");
  }
  const double tip_inertia = m_p * p.l * p.l;
  AxisDerivative d;
  d.theta_dot = s.theta_dot;
  d.alpha_dot = s.alpha_dot;
  d.theta_ddot = (link.k_s * s.alpha + link.c_s * s.alpha_dot + tau_w -
                  (p.D_c + link.c_s) * s.theta_dot - (p.K_c + link.k_s) * s.theta) /
                 p.J_att;
  d.alpha_ddot = (link.k_s * s.theta + link.c_s * s.theta_dot + tau_d -
                  (p.c_p + link.c_s) * s.alpha_dot - (m_p * p.g * p.l + link.k_s) * s.alpha) /
                 tip_inertia;
  return d;
}

std::array<AxisDerivative, kAxes> dynamics_rhs(const SimState& state, double sigma,
                                               const DisturbanceSample& dist,
                                               const ModelParams& params) {
  const LinkStiffness link = blend_stiffness(sigma, params);
  std::array<AxisDerivative, kAxes> out;
  for (std::size_t i = 0; i < kAxes; ++i) {
    out[i] = axis_rhs(state.axes[i], link, state.m_p_current, dist.tau_d[i], dist.tau_w[i], params);
  }
  return out;
}

AxisVector to_vector(const AxisState& a) { return {a.theta, a.theta_dot, a.alpha, a.alpha_dot}; }

AxisState from_vector(const AxisVector& v) { return {v[0], v[1], v[2], v[3]}; }

AxisMatrix assemble_state_matrix(double sigma, const ModelParams& p) {
  const LinkStiffness link = blend_stiffness(sigma, p);
  if (!(p.m_p > 0.0)) {
    throw DegeneratePayloadError("degenerate payload: params.m_p must be > 0 for the state matrix");
  }
  const double M = p.m_p * p.l * p.l;
  AxisMatrix A = AxisMatrix::Zero();
  A(0, 1) = 1.0;
  A(1, 0) = -(p.K_c + link.k_s) / p.J_att;
  A(1, 1) = -(p.D_c + link.c_s) / p.J_att;
  A(1, 2) = link.k_s / p.J_att;
  A(1, 3) = link.c_s / p.J_att;
  A(2, 3) = 1.0;
  A(3, 0) = link.k_s / M;
  A(3, 1) = link.c_s / M;
  A(3, 2) = -(p.m_p * p.g * p.l + link.k_s) / M;
  A(3, 3) = -(p.c_p + link.c_s) / M;
  return A;
}

AxisVector forcing_vector(double tau_d, double tau_w, const ModelParams& p) {
  return {0.0, tau_w / p.J_att, 0.0, tau_d / (p.m_p * p.l * p.l)};
}

double mechanical_energy(const AxisState& s, double k_s, double m_p, const ModelParams& p) {
  const double rel = s.theta - s.alpha;
  return 0.5 * p.J_att * s.theta_dot * s.theta_dot + 0.5 * p.K_c * s.theta * s.theta +
         0.5 * m_p * p.l * p.l * s.alpha_dot * s.alpha_dot + 0.5 * m_p * p.g * p.l * s.alpha * s.alpha +
         0.5 * k_s * rel * rel;
}

bool within_envelope(const AxisState& s) {
  constexpr double limit = std::numbers::pi / 2.0;
  return std::abs(s.theta) < limit && std::abs(s.alpha) < limit && std::isfinite(s.theta_dot) &&
         std::isfinite(s.alpha_dot);
}

}  // namespace vsl
