// Signal metrics over analysis windows, modal analysis across the stiffness
// blend, and run-to-run comparison.
#pragma once

#include <array>
#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vsl/model.hpp"
#include "vsl/scenario.hpp"
#include "vsl/telemetry.hpp"

namespace vsl {

inline constexpr double kSettleFraction = 0.05;

// Angles are combined over axes as the per-sample Euclidean norm.
struct WindowMetrics {
  std::string label;
  double t0 = 0.0;
  double t1 = 0.0;
  std::size_t samples = 0;
  double sigma_mean = 0.0;
  double rms_theta = 0.0;
  double rms_alpha = 0.0;
  double peak_theta = 0.0;
  double peak_alpha = 0.0;
  double settling_time = 0.0;  // s after the last in-window event
  bool settled = true;
  double transmissibility = 0.0;  // rms_theta / rms_alpha, 0 when both vanish
  double tracking_rms = 0.0;      // RMS(alpha - theta)
  double peak_tracking = 0.0;     // max |alpha - theta|
};

/// Throws ValidationError when the window holds no samples or t1 <= t0.
WindowMetrics window_metrics(std::span<const TelemetryRecord> records, const AnalysisWindow& window,
                             std::span<const double> event_times = {},
                             double settle_fraction = kSettleFraction);

/// Scenario events (impulse ends, payload events, schedule entries) used for
/// settling-time references.
std::vector<double> scenario_event_times(const Scenario& scenario);

struct ModalMode {
  double omega_n = 0.0;  // rad/s, |lambda| of the mode's eigenvalue pair
  double zeta = 0.0;
};

struct ModalPoint {
  double sigma = 0.0;
  std::array<std::complex<double>, 4> eigenvalues{};
  std::array<ModalMode, 2> modes{};              // ascending omega_n
  std::array<double, 2> undamped_omega{};        // from K v = w^2 M v, ascending
  double max_real_part = 0.0;
};

/// Throws DomainError for grid points outside [0, 1].
std::vector<ModalPoint> modal_sweep(const ModelParams& params, std::span<const double> sigma_grid);

/// {0, 0.25, 0.5, 0.75, 1}
std::vector<double> default_modal_grid();

struct RunSummary {
  std::string scenario;
  std::vector<WindowMetrics> windows;
  std::vector<ModalPoint> modal;
  std::size_t validity_breaches = 0;
};

RunSummary summarize(const Scenario& scenario, std::span<const TelemetryRecord> records,
                     std::size_t validity_breaches);

struct WindowComparison {
  std::string label;
  std::map<std::string, double> ratios;  // b / a; 1 when both are zero
  std::string dominant;                  // "a", "b", "tie" or "mixed" on tip-oscillation metrics
};

struct ComparisonReport {
  std::string a;
  std::string b;
  std::vector<WindowComparison> windows;
};

/// Throws ValidationError listing unmatched window labels.
ComparisonReport compare_runs(const RunSummary& a, const RunSummary& b);

std::string summary_yaml(const RunSummary& summary);
std::string summary_csv(const RunSummary& summary);
std::string comparison_csv(const ComparisonReport& report);

/// Time (from the first sample) after which `trace` stays inside
/// band_fraction * |target - start| of target. 0 if it always does.
double settle_time(std::span<const double> trace, double dt, double start, double target,
                   double band_fraction = 0.02);

}  // namespace vsl
