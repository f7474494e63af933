#include <cmath>

#include "doctest.h"
#include "vsl/disturbance.hpp"
#include "vsl/errors.hpp"
#include "vsl/integrator.hpp"

using namespace vsl;

TEST_CASE("impulse is a rectangle on [t, t + duration)") {
  const DisturbanceSignal sig({{1.0, 0.05, 2.0, Axis::y, TorqueTarget::tip}}, {}, 0);
  CHECK(sig.sample(0.999).tau_d[1] == 0.0);
  CHECK(sig.sample(1.0).tau_d[1] == 2.0);
  CHECK(sig.sample(1.049).tau_d[1] == 2.0);
  CHECK(sig.sample(1.05).tau_d[1] == 0.0);
  CHECK(sig.sample(1.02).tau_d[0] == 0.0);
  CHECK(sig.sample(1.02).tau_w[1] == 0.0);
  CHECK(sig.active_impulses(1.01) == 1);
  CHECK(sig.active_impulses(2.0) == 0);
}

TEST_CASE("impulse quadrature on an aligned grid gives magnitude x duration") {
  const double dt = 1e-3;
  const DisturbanceSignal sig({{0.5, 0.05, 18.8, Axis::x, TorqueTarget::body}}, {}, 0);
  double area = 0.0;
  for (int i = 0; i < 2000; ++i) area += sig.sample(i * dt).tau_w[0] * dt;
  CHECK(area == doctest::Approx(18.8 * 0.05).epsilon(1e-9));
}

TEST_CASE("overlapping impulses add") {
  const DisturbanceSignal sig({{1.0, 1.0, 2.0, Axis::x, TorqueTarget::tip}, {1.5, 1.0, -0.5, Axis::x, TorqueTarget::tip}},
                              {}, 0);
  CHECK(sig.sample(1.7).tau_d[0] == doctest::Approx(1.5));
  CHECK(sig.active_impulses(1.7) == 2);
}

TEST_CASE("invalid impulse lists") {
  CHECK_THROWS_AS(validate_impulse(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(validate_impulse(INFINITY, 0.1), DomainError);
  CHECK_THROWS_AS(DisturbanceSignal({{2.0, 0.1, 1.0}, {1.0, 0.1, 1.0}}, {}, 0), ValidationError);
  CHECK_THROWS_AS(DisturbanceSignal({{1.0, -0.1, 1.0}}, {}, 0), ValidationError);
  SustainedEvent bad;
  bad.t_start = 1.0;
  bad.t_end = 2.0;
  bad.gust_period = 0.0;
  CHECK_THROWS_AS(DisturbanceSignal({}, {bad}, 0), ValidationError);
}

TEST_CASE("sustained forcing stays within mean +- amplitude") {
  SustainedEvent fan{2.0, 10.0, 0.5, 1.0, 1.5, Axis::x, TorqueTarget::tip};
  const DisturbanceSignal sig({}, {fan}, 42);
  CHECK(sig.sample(1.99).tau_d[0] == 0.0);
  CHECK(sig.sample(10.0).tau_d[0] == 0.0);
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  int n = 0;
  for (double t = 2.0; t < 10.0; t += 1e-3, ++n) {
    const double v = sig.sample(t).tau_d[0];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  CHECK(lo >= -0.5 - 1e-12);
  CHECK(hi <= 1.5 + 1e-12);
  CHECK(hi - lo > 0.5);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.1));
  CHECK(sig.active_sustained(5.0) == 1);
}

TEST_CASE("gust phases follow the seed") {
  const SustainedEvent fan{0.0, 5.0, 0.0, 1.0, 2.0, Axis::y, TorqueTarget::tip};
  CHECK(gust_phases_for(fan, 1) == gust_phases_for(fan, 1));
  CHECK(gust_phases_for(fan, 1) != gust_phases_for(fan, 2));
  for (const double ph : gust_phases_for(fan, 7)) {
    CHECK(ph >= 0.0);
    CHECK(ph < 2.0 * std::numbers::pi);
  }
  const DisturbanceSignal a({}, {fan}, 9), b({}, {fan}, 9);
  for (double t = 0.0; t < 5.0; t += 0.013) CHECK(a.sample(t).tau_d[1] == b.sample(t).tau_d[1]);
}

TEST_CASE("zero amplitude gust is a constant") {
  const DisturbanceSignal sig({}, {{0.0, 5.0, 0.7, 0.0, 1.0, Axis::x, TorqueTarget::body}}, 3);
  CHECK(sig.sample(2.2).tau_w[0] == 0.7);
}

TEST_CASE("merged signal is the pointwise sum") {
  const DisturbanceSignal a({{1.0, 0.05, 3.0}}, {{0.0, 8.0, 0.2, 0.4, 1.2, Axis::x, TorqueTarget::tip}}, 5);
  const DisturbanceSignal b({{0.5, 0.1, -1.0, Axis::y}}, {{1.0, 6.0, 0.0, 0.3, 2.0, Axis::y, TorqueTarget::body}}, 5);
  const auto m = a.merged(b);
  CHECK(m.seed() == 5);
  CHECK(m.impulses().size() == 2);
  for (double t = 0.0; t < 8.0; t += 0.0107) {
    const auto sa = a.sample(t), sb = b.sample(t), sm = m.sample(t);
    for (std::size_t i = 0; i < kAxes; ++i) {
      CHECK(sm.tau_d[i] == doctest::Approx(sa.tau_d[i] + sb.tau_d[i]).epsilon(1e-12));
      CHECK(sm.tau_w[i] == doctest::Approx(sa.tau_w[i] + sb.tau_w[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("superposition: response to a union is the sum of responses") {
  const ModelParams p;
  const DisturbanceSignal a({{0.3, 0.05, 5.0}}, {{1.0, 4.0, 0.1, 0.5, 1.0, Axis::x, TorqueTarget::tip}}, 11);
  const DisturbanceSignal b({{0.8, 0.2, -2.0, Axis::x, TorqueTarget::body}}, {}, 11);
  const auto m = a.merged(b);
  auto simulate = [&](const DisturbanceSignal& sig) {
    SimState s;
    s.m_p_current = p.m_p;
    for (int i = 0; i < 4000; ++i) s = step(s, 1e-3, 0.6, [&](double t) { return sig.sample(t); }, p);
    return s;
  };
  const auto ra = simulate(a), rb = simulate(b), rm = simulate(m);
  CHECK(rm.axes[0].theta == doctest::Approx(ra.axes[0].theta + rb.axes[0].theta).epsilon(1e-10));
  CHECK(rm.axes[0].alpha == doctest::Approx(ra.axes[0].alpha + rb.axes[0].alpha).epsilon(1e-10));
  CHECK(rm.axes[0].alpha_dot == doctest::Approx(ra.axes[0].alpha_dot + rb.axes[0].alpha_dot).epsilon(1e-10));
}
