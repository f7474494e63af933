#include "vsl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <yaml-cpp/yaml.h>

#include "vsl/errors.hpp"

namespace vsl {
namespace {

double norm2(const std::array<double, kAxes>& v) { return std::hypot(v[0], v[1]); }

double ratio(double b, double a) {
  if (a == 0.0 && b == 0.0) return 1.0;
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return b / a;
}

ModalMode mode_from_pair(std::complex<double> l1, std::complex<double> l2) {
  const double omega = std::sqrt(std::abs(l1 * l2));
  const double zeta = omega > 0.0 ? -(l1 + l2).real() / (2.0 * omega) : 0.0;
  return {omega, zeta};
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

WindowMetrics window_metrics(std::span<const TelemetryRecord> records, const AnalysisWindow& window,
                             std::span<const double> event_times, double settle_fraction) {
  if (!(window.t1 > window.t0)) throw ValidationError("window '" + window.label + "': needs t1 > t0");
  constexpr double eps = 1e-9;
  const auto first = std::lower_bound(records.begin(), records.end(), window.t0 - eps,
                                      [](const TelemetryRecord& r, double t) { return r.t < t; });
  const auto last = std::upper_bound(first, records.end(), window.t1 + eps,
                                     [](double t, const TelemetryRecord& r) { return t < r.t; });
  const std::span<const TelemetryRecord> w(first, last);
  if (w.empty()) throw ValidationError("window '" + window.label + "': empty window");

  WindowMetrics m;
  m.label = window.label;
  m.t0 = window.t0;
  m.t1 = window.t1;
  m.samples = w.size();
  double sum_sigma = 0.0, sum_th = 0.0, sum_al = 0.0, sum_tr = 0.0;
  for (const auto& r : w) {
    const double th = norm2(r.theta);
    const double al = norm2(r.alpha);
    const double tr = std::hypot(r.alpha[0] - r.theta[0], r.alpha[1] - r.theta[1]);
    sum_sigma += r.sigma_measured;
    sum_th += th * th;
    sum_al += al * al;
    sum_tr += tr * tr;
    m.peak_theta = std::max(m.peak_theta, th);
    m.peak_alpha = std::max(m.peak_alpha, al);
    m.peak_tracking = std::max(m.peak_tracking, tr);
  }
  const double n = static_cast<double>(w.size());
  m.sigma_mean = sum_sigma / n;
  m.rms_theta = std::sqrt(sum_th / n);
  m.rms_alpha = std::sqrt(sum_al / n);
  m.tracking_rms = std::sqrt(sum_tr / n);
  m.transmissibility = m.rms_alpha > 0.0 ? m.rms_theta / m.rms_alpha : 0.0;

  double reference = window.t0;
  for (double t : event_times) {
    if (t >= window.t0 && t <= window.t1) reference = std::max(reference, t);
  }
  const double threshold = settle_fraction * m.peak_alpha;
  // Last in-window sample after the reference that is still above threshold.
  double settle_at = reference;
  m.settled = true;
  for (const auto& r : w) {
    if (r.t < reference) continue;
    if (norm2(r.alpha) >= threshold && m.peak_alpha > 0.0) settle_at = r.t;
  }
  if (m.peak_alpha > 0.0 && settle_at >= w.back().t && norm2(w.back().alpha) >= threshold) {
    m.settled = false;
  }
  m.settling_time = m.peak_alpha > 0.0 ? settle_at - reference : 0.0;
  return m;
}

std::vector<double> scenario_event_times(const Scenario& s) {
  std::vector<double> out;
  for (const auto& ev : s.disturbances.impulses()) out.push_back(ev.t_start + ev.duration);
  for (const auto& ev : s.payload_events) out.push_back(ev.t);
  for (const auto& ev : s.stiffness_schedule) out.push_back(ev.t);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> default_modal_grid() { return {0.0, 0.25, 0.5, 0.75, 1.0}; }

std::vector<ModalPoint> modal_sweep(const ModelParams& params, std::span<const double> sigma_grid) {
  std::vector<ModalPoint> out;
  out.reserve(sigma_grid.size());
  for (double sigma : sigma_grid) {
    validate_sigma(sigma);
    ModalPoint pt;
    pt.sigma = sigma;
    const Eigen::EigenSolver<AxisMatrix> eig(assemble_state_matrix(sigma, params), false);
    const Eigen::Vector4cd lambdas = eig.eigenvalues();
    pt.max_real_part = -std::numeric_limits<double>::infinity();
    std::vector<std::complex<double>> upper, reals;
    for (int i = 0; i < 4; ++i) {
      pt.eigenvalues[static_cast<std::size_t>(i)] = lambdas[i];
      pt.max_real_part = std::max(pt.max_real_part, lambdas[i].real());
      const double tol = 1e-12 * std::max(1.0, std::abs(lambdas[i]));
      if (lambdas[i].imag() > tol) upper.push_back(lambdas[i]);
      else if (std::abs(lambdas[i].imag()) <= tol) reals.push_back({lambdas[i].real(), 0.0});
    }
    std::vector<ModalMode> modes;
    for (const auto& l : upper) modes.push_back(mode_from_pair(l, std::conj(l)));
    std::sort(reals.begin(), reals.end(), [](auto a, auto b) { return a.real() < b.real(); });
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) modes.push_back(mode_from_pair(reals[i], reals[i + 1]));
    std::sort(modes.begin(), modes.end(), [](const ModalMode& a, const ModalMode& b) { return a.omega_n < b.omega_n; });
    for (std::size_t i = 0; i < std::min<std::size_t>(2, modes.size()); ++i) pt.modes[i] = modes[i];

    const LinkStiffness link = blend_stiffness(sigma, params);
    Eigen::Matrix2d K, Minv;
    K << params.K_c + link.k_s, -link.k_s, -link.k_s, params.m_p * params.g * params.l + link.k_s;
    Minv << 1.0 / params.J_att, 0.0, 0.0, 1.0 / (params.m_p * params.l * params.l);
    // M^-1/2 K M^-1/2 is symmetric with the same spectrum as M^-1 K.
    Eigen::Matrix2d S = Minv.cwiseSqrt() * K * Minv.cwiseSqrt();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> sym(S, Eigen::EigenvaluesOnly);
    pt.undamped_omega = {std::sqrt(sym.eigenvalues()[0]), std::sqrt(sym.eigenvalues()[1])};
    out.push_back(pt);
  }
  return out;
}

RunSummary summarize(const Scenario& scenario, std::span<const TelemetryRecord> records,
                     std::size_t validity_breaches) {
  RunSummary s;
  s.scenario = scenario.name;
  const std::vector<double> events = scenario_event_times(scenario);
  for (const auto& w : scenario.windows) s.windows.push_back(window_metrics(records, w, events));
  const auto grid = default_modal_grid();
  s.modal = modal_sweep(scenario.params, grid);
  s.validity_breaches = validity_breaches;
  return s;
}

ComparisonReport compare_runs(const RunSummary& a, const RunSummary& b) {
  std::set<std::string> la, lb;
  for (const auto& w : a.windows) la.insert(w.label);
  for (const auto& w : b.windows) lb.insert(w.label);
  std::vector<std::string> unmatched;
  for (const auto& l : la) if (!lb.contains(l)) unmatched.push_back(l);
  for (const auto& l : lb) if (!la.contains(l)) unmatched.push_back(l);
  if (!unmatched.empty()) {
    std::string msg = "window mismatch, unmatched windows:";
    for (const auto& l : unmatched) msg += " " + l;
    throw ValidationError(msg);
  }

  ComparisonReport report{a.scenario, b.scenario, {}};
  for (const auto& wa : a.windows) {
    const auto& wb = *std::find_if(b.windows.begin(), b.windows.end(),
                                   [&](const WindowMetrics& w) { return w.label == wa.label; });
    WindowComparison c;
    c.label = wa.label;
    c.ratios["rms_theta"] = ratio(wb.rms_theta, wa.rms_theta);
    c.ratios["rms_alpha"] = ratio(wb.rms_alpha, wa.rms_alpha);
    c.ratios["peak_theta"] = ratio(wb.peak_theta, wa.peak_theta);
    c.ratios["peak_alpha"] = ratio(wb.peak_alpha, wa.peak_alpha);
    c.ratios["settling_time"] = ratio(wb.settling_time, wa.settling_time);
    c.ratios["transmissibility"] = ratio(wb.transmissibility, wa.transmissibility);
    c.ratios["tracking_rms"] = ratio(wb.tracking_rms, wa.tracking_rms);
    c.ratios["peak_tracking"] = ratio(wb.peak_tracking, wa.peak_tracking);

    int b_better = 0, a_better = 0;
    for (const char* key : {"rms_alpha", "peak_alpha", "tracking_rms", "peak_tracking"}) {
      const double r = c.ratios[key];
      if (r < 1.0) ++b_better;
      else if (r > 1.0) ++a_better;
    }
    if (a_better == 0 && b_better == 0) c.dominant = "tie";
    else if (a_better == 0) c.dominant = "b";
    else if (b_better == 0) c.dominant = "a";
    else c.dominant = "mixed";
    report.windows.push_back(std::move(c));
  }
  return report;
}

std::string summary_yaml(const RunSummary& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(9);
  out << YAML::BeginMap;
  out << YAML::Key << "schema_version" << YAML::Value << kScenarioSchemaVersion;
  out << YAML::Key << "scenario" << YAML::Value << s.scenario;
  out << YAML::Key << "validity_breaches" << YAML::Value << s.validity_breaches;
  out << YAML::Key << "windows" << YAML::Value << YAML::BeginSeq;
  for (const auto& w : s.windows) {
    out << YAML::BeginMap;
    out << YAML::Key << "label" << YAML::Value << w.label;
    out << YAML::Key << "t0" << YAML::Value << w.t0;
    out << YAML::Key << "t1" << YAML::Value << w.t1;
    out << YAML::Key << "samples" << YAML::Value << w.samples;
    out << YAML::Key << "sigma_mean" << YAML::Value << w.sigma_mean;
    out << YAML::Key << "rms_theta" << YAML::Value << w.rms_theta;
    out << YAML::Key << "rms_alpha" << YAML::Value << w.rms_alpha;
    out << YAML::Key << "peak_theta" << YAML::Value << w.peak_theta;
    out << YAML::Key << "peak_alpha" << YAML::Value << w.peak_alpha;
    out << YAML::Key << "settling_time" << YAML::Value << w.settling_time;
    out << YAML::Key << "settled" << YAML::Value << w.settled;
    out << YAML::Key << "transmissibility" << YAML::Value << w.transmissibility;
    out << YAML::Key << "tracking_rms" << YAML::Value << w.tracking_rms;
    out << YAML::Key << "peak_tracking" << YAML::Value << w.peak_tracking;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "modal" << YAML::Value << YAML::BeginSeq;
  for (const auto& p : s.modal) {
    out << YAML::BeginMap;
    out << YAML::Key << "sigma" << YAML::Value << p.sigma;
    out << YAML::Key << "omega_n" << YAML::Value << YAML::Flow << YAML::BeginSeq << p.modes[0].omega_n
        << p.modes[1].omega_n << YAML::EndSeq;
    out << YAML::Key << "zeta" << YAML::Value << YAML::Flow << YAML::BeginSeq << p.modes[0].zeta
        << p.modes[1].zeta << YAML::EndSeq;
    out << YAML::Key << "undamped_omega" << YAML::Value << YAML::Flow << YAML::BeginSeq
        << p.undamped_omega[0] << p.undamped_omega[1] << YAML::EndSeq;
    out << YAML::Key << "max_real_part" << YAML::Value << p.max_real_part;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string summary_csv(const RunSummary& s) {
  std::ostringstream out;
  out << "window,t0,t1,samples,sigma_mean,rms_theta,rms_alpha,peak_theta,peak_alpha,settling_time,"
         "transmissibility,tracking_rms,peak_tracking\n";
  for (const auto& w : s.windows) {
    out << w.label << ',' << fmt(w.t0) << ',' << fmt(w.t1) << ',' << w.samples << ',' << fmt(w.sigma_mean)
        << ',' << fmt(w.rms_theta) << ',' << fmt(w.rms_alpha) << ',' << fmt(w.peak_theta) << ','
        << fmt(w.peak_alpha) << ',' << fmt(w.settling_time) << ',' << fmt(w.transmissibility) << ','
        << fmt(w.tracking_rms) << ',' << fmt(w.peak_tracking) << '\n';
  }
  return out.str();
}

std::string comparison_csv(const ComparisonReport& report) {
  std::ostringstream out;
  out << "window,metric,ratio_b_over_a,dominant\n";
  for (const auto& w : report.windows) {
    for (const auto& [metric, r] : w.ratios) out << w.label << ',' << metric << ',' << fmt(r) << ',' << w.dominant << '\n';
  }
  return out.str();
}

double settle_time(std::span<const double> trace, double dt, double start, double target,
                   double band_fraction) {
  const double band = band_fraction * std::abs(target - start);
  std::size_t last_out = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (std::abs(trace[i] - target) > band) last_out = i + 1;
  }
  return static_cast<double>(last_out) * dt;
}

}  // namespace vsl
