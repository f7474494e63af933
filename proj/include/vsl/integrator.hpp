// Fixed-step classical RK4 over both axes. Sigma is held constant over the
// step, so each step integrates an LTI system; disturbances are sampled at the
// RK stage times.
#pragma once

#include <concepts>
#include <functional>

#include "vsl/model.hpp"

namespace vsl {

inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kMaxDt = 1e-2;

/// Throws DomainError unless 0 < dt <= kMaxDt.
void validate_dt(double dt);

using DisturbanceFn = std::function<DisturbanceSample(double t)>;

/// Advances state by dt. The returned state carries t + dt, the sigma used and
/// the envelope flag of the new point. Bit-deterministic.
SimState step(const SimState& state, double dt, double sigma, const DisturbanceFn& disturbance,
              const ModelParams& params);

/// Constant-forcing overload.
SimState step(const SimState& state, double dt, double sigma, const DisturbanceSample& disturbance,
              const ModelParams& params);

}  // namespace vsl
