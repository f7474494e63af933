#include "vsl/disturbance.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "vsl/errors.hpp"

namespace vsl {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t mix(std::uint64_t h, double v) { return splitmix64(h ^ std::bit_cast<std::uint64_t>(v)); }

// Portable unit interval from raw engine bits; std::uniform_real_distribution
// is implementation-defined.
double unit(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

void add(DisturbanceSample& s, Axis axis, TorqueTarget target, double value) {
  auto& arr = target == TorqueTarget::tip ? s.tau_d : s.tau_w;
  arr[static_cast<std::size_t>(axis)] += value;
}

}  // namespace

void validate_impulse(double magnitude, double duration) {
  if (!std::isfinite(magnitude)) throw DomainError("impulse magnitude must be finite");
  if (!(duration > 0.0)) {
    std::ostringstream msg;
    msg << "impulse duration must be > 0 (got " << duration << ")";
    throw DomainError(msg.str());
  }
}

std::array<double, 3> gust_phases_for(const SustainedEvent& ev, std::uint64_t seed) {
  std::uint64_t h = splitmix64(seed);
  h = mix(h, ev.t_start);
  h = mix(h, ev.t_end);
  h = mix(h, ev.mean);
  h = mix(h, ev.gust_amplitude);
  h = mix(h, ev.gust_period);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(ev.axis) << 1 | static_cast<std::uint64_t>(ev.target)));
  std::mt19937_64 eng(h);
  std::array<double, 3> out{};
  for (double& p : out) p = 2.0 * std::numbers::pi * unit(eng);
  return out;
}

DisturbanceSignal::DisturbanceSignal(std::vector<ImpulseEvent> impulses,
                                     std::vector<SustainedEvent> sustained, std::uint64_t seed)
    : impulses_(std::move(impulses)), sustained_(std::move(sustained)), seed_(seed) {
  for (std::size_t i = 0; i < impulses_.size(); ++i) {
    const auto& ev = impulses_[i];
    if (!(ev.duration > 0.0)) {
      std::ostringstream msg;
      msg << "disturbances.impulses[" << i << "].duration must be > 0 (got " << ev.duration << ")";
      throw ValidationError(msg.str());
    }
    if (!(ev.t_start >= 0.0) || !std::isfinite(ev.magnitude)) {
      std::ostringstream msg;
      msg << "disturbances.impulses[" << i << "] has invalid start time or magnitude";
      throw ValidationError(msg.str());
    }
    if (i > 0 && ev.t_start < impulses_[i - 1].t_start) {
      std::ostringstream msg;
      msg << "disturbances.impulses[" << i << "] is not time-ordered";
      throw ValidationError(msg.str());
    }
  }
  phases_.reserve(sustained_.size());
  for (std::size_t i = 0; i < sustained_.size(); ++i) {
    const auto& ev = sustained_[i];
    if (!(ev.t_end > ev.t_start) || !(ev.t_start >= 0.0)) {
      std::ostringstream msg;
      msg << "disturbances.sustained[" << i << "] needs 0 <= t_start < t_end";
      throw ValidationError(msg.str());
    }
    if (!(ev.gust_period > 0.0) || !(ev.gust_amplitude >= 0.0)) {
      std::ostringstream msg;
      msg << "disturbances.sustained[" << i << "] needs gust_period > 0 and gust_amplitude >= 0";
      throw ValidationError(msg.str());
    }
    phases_.push_back(gust_phases_for(ev, seed_));
  }
}

DisturbanceSample DisturbanceSignal::sample(double t) const {
  DisturbanceSample s;
  for (const auto& ev : impulses_) {
    if (ev.active(t)) add(s, ev.axis, ev.target, ev.magnitude);
  }
  for (std::size_t i = 0; i < sustained_.size(); ++i) {
    const auto& ev = sustained_[i];
    if (!ev.active(t)) continue;
    double value = ev.mean;
    if (ev.gust_amplitude != 0.0) {
      const double w = 2.0 * std::numbers::pi / ev.gust_period;
      const double local = t - ev.t_start;
      double gust = 0.0;
      for (std::size_t k = 0; k < kGustTones.size(); ++k) {
        gust += std::sin(w * kGustTones[k] * local + phases_[i][k]);
      }
      value += ev.gust_amplitude * gust / static_cast<double>(kGustTones.size());
    }
    add(s, ev.axis, ev.target, value);
  }
  return s;
}

std::size_t DisturbanceSignal::active_impulses(double t) const {
  std::size_t n = 0;
  for (const auto& ev : impulses_) n += ev.active(t) ? 1 : 0;
  return n;
}

std::size_t DisturbanceSignal::active_sustained(double t) const {
  std::size_t n = 0;
  for (const auto& ev : sustained_) n += ev.active(t) ? 1 : 0;
  return n;
}

DisturbanceSignal DisturbanceSignal::merged(const DisturbanceSignal& other) const {
  std::vector<ImpulseEvent> imp = impulses_;
  imp.insert(imp.end(), other.impulses_.begin(), other.impulses_.end());
  std::stable_sort(imp.begin(), imp.end(),
                   [](const ImpulseEvent& a, const ImpulseEvent& b) { return a.t_start < b.t_start; });
  std::vector<SustainedEvent> sus = sustained_;
  sus.insert(sus.end(), other.sustained_.begin(), other.sustained_.end());
  return DisturbanceSignal(std::move(imp), std::move(sus), seed_);
}

}  // namespace vsl
