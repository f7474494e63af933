#include "vsl/integrator.hpp"

#include <sstream>

#include "vsl/errors.hpp"

namespace vsl {
namespace {

using Packed = std::array<AxisState, kAxes>;

Packed derivative(const Packed& x, double m_p, LinkStiffness link, const DisturbanceSample& d,
                  const ModelParams& p) {
  Packed out;
  for (std::size_t i = 0; i < kAxes; ++i) {
    const AxisDerivative r = axis_rhs(x[i], link, m_p, d.tau_d[i], d.tau_w[i], p);
    out[i] = {r.theta_dot, r.theta_ddot, r.alpha_dot, r.alpha_ddot};
  }
  return out;
}

Packed axpy(const Packed& x, double h, const Packed& k) {
  Packed out;
  for (std::size_t i = 0; i < kAxes; ++i) {
    out[i].theta = x[i].theta + h * k[i].theta;
    out[i].theta_dot = x[i].theta_dot + h * k[i].theta_dot;
    out[i].alpha = x[i].alpha + h * k[i].alpha;
    out[i].alpha_dot = x[i].alpha_dot + h * k[i].alpha_dot;
  }
  return out;
}

template <typename Sampler>
SimState rk4(const SimState& state, double dt, double sigma, Sampler&& sample,
             const ModelParams& params) {
  validate_dt(dt);
  const LinkStiffness link = blend_stiffness(sigma, params);
  const double m = state.m_p_current;
  const double t = state.t;
  const double half = 0.5 * dt;

  const Packed& x = state.axes;
  const Packed k1 = derivative(x, m, link, sample(t), params);
  const Packed k2 = derivative(axpy(x, half, k1), m, link, sample(t + half), params);
  const Packed k3 = derivative(axpy(x, half, k2), m, link, sample(t + half), params);
  const Packed k4 = derivative(axpy(x, dt, k3), m, link, sample(t + dt), params);

  SimState next = state;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < kAxes; ++i) {
    AxisState& s = next.axes[i];
    s.theta += w * (k1[i].theta + 2.0 * k2[i].theta + 2.0 * k3[i].theta + k4[i].theta);
    s.theta_dot +=
        w * (k1[i].theta_dot + 2.0 * k2[i].theta_dot + 2.0 * k3[i].theta_dot + k4[i].theta_dot);
    s.alpha += w * (k1[i].alpha + 2.0 * k2[i].alpha + 2.0 * k3[i].alpha + k4[i].alpha);
    s.alpha_dot +=
        w * (k1[i].alpha_dot + 2.0 * k2[i].alpha_dot + 2.0 * k3[i].alpha_dot + k4[i].alpha_dot);
  }
  next.t = t + dt;
  next.sigma = sigma;
  next.in_envelope = within_envelope(next.axes[0]) && within_envelope(next.axes[1]);
  return next;
}

}  // namespace

void validate_dt(double dt) {
  if (!(dt > 0.0 && dt <= kMaxDt)) {
    std::ostringstream msg;
    msg << "dt must be in (0, " << kMaxDt << "] s (got " << dt << ")";
    throw DomainError(msg.str());
  }
}

SimState step(const SimState& state, double dt, double sigma, const DisturbanceFn& disturbance,
              const ModelParams& params) {
  return rk4(state, dt, sigma, disturbance, params);
}

SimState step(const SimState& state, double dt, double sigma, const DisturbanceSample& disturbance,
              const ModelParams& params) {
  return rk4(state, dt, sigma, [&](double) { return disturbance; }, params);
}

}  // namespace vsl
