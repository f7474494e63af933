// Tip impacts (rectangular torque pulses) and sustained fan forcing
// (mean + seeded three-tone gust), on the tip (tau_d) or body (tau_w).
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vsl/model.hpp"

namespace vsl {

enum class TorqueTarget { tip, body };

struct ImpulseEvent {
  double t_start = 0.0;
  double duration = 0.05;  // s
  double magnitude = 0.0;  // N m
  Axis axis = Axis::x;
  TorqueTarget target = TorqueTarget::tip;

  bool active(double t) const { return t >= t_start && t < t_start + duration; }
};

struct SustainedEvent {
  double t_start = 0.0;
  double t_end = 0.0;
  double mean = 0.0;            // N m
  double gust_amplitude = 0.0;  // N m, peak bound of the gust term
  double gust_period = 1.0;     // s, fundamental
  Axis axis = Axis::x;
  TorqueTarget target = TorqueTarget::tip;

  bool active(double t) const { return t >= t_start && t < t_end; }
};

/// Relative frequencies of the three gust tones.
inline constexpr std::array<double, 3> kGustTones{1.0, 1.37, 0.71};

/// Throws DomainError for a non-finite magnitude or non-positive duration.
void validate_impulse(double magnitude, double duration);

class DisturbanceSignal {
 public:
  DisturbanceSignal() = default;
  /// Throws ValidationError on unordered impulses, non-positive durations or periods.
  DisturbanceSignal(std::vector<ImpulseEvent> impulses, std::vector<SustainedEvent> sustained,
                    std::uint64_t seed);

  DisturbanceSample sample(double t) const;

  const std::vector<ImpulseEvent>& impulses() const { return impulses_; }
  const std::vector<SustainedEvent>& sustained() const { return sustained_; }
  std::uint64_t seed() const { return seed_; }

  /// Phases of the gust tones of sustained event i.
  const std::array<double, 3>& gust_phases(std::size_t i) const { return phases_.at(i); }

  std::size_t active_impulses(double t) const;
  std::size_t active_sustained(double t) const;

  /// Union of two signals; the seed of *this is kept.
  DisturbanceSignal merged(const DisturbanceSignal& other) const;

 private:
  std::vector<ImpulseEvent> impulses_;
  std::vector<SustainedEvent> sustained_;
  std::uint64_t seed_ = 0;
  std::vector<std::array<double, 3>> phases_;
};

/// Gust phases depend on the seed and the event itself, not on its position in
/// the list.
std::array<double, 3> gust_phases_for(const SustainedEvent& ev, std::uint64_t seed);

}  // namespace vsl
