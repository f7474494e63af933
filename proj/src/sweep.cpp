#include "vsl/sweep.hpp"

#include <cstdio>
#include <exception>
#include <sstream>

#include <omp.h>

#include "vsl/errors.hpp"

namespace vsl {

std::vector<SweepPoint> expand_sweep(const YAML::Node& base, const std::string& parameter,
                                     const std::vector<double>& grid, const std::string& source) {
  if (grid.empty()) throw ValidationError("sweep grid is empty");
  std::vector<SweepPoint> out;
  out.reserve(grid.size());
  for (double v : grid) {
    YAML::Node doc = YAML::Clone(base);
    set_path(doc, parameter, YAML::Node(v));
    out.push_back({v, scenario_from_node(doc, source)});
  }
  return out;
}

std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios) {
  std::vector<RunResult> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) out.push_back(run(s));
  return out;
}

std::vector<RunResult> run_batch_parallel(const std::vector<Scenario>& scenarios, int threads) {
  std::vector<RunResult> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const int n = static_cast<int>(scenarios.size());
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run(scenarios[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::vector<std::vector<ModalPoint>> modal_batch_serial(const std::vector<ModelParams>& params,
                                                        const std::vector<double>& sigma_grid) {
  std::vector<std::vector<ModalPoint>> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(modal_sweep(p, sigma_grid));
  return out;
}

std::vector<std::vector<ModalPoint>> modal_batch_parallel(const std::vector<ModelParams>& params,
                                                          const std::vector<double>& sigma_grid,
                                                          int threads) {
  std::vector<std::vector<ModalPoint>> out(params.size());
  std::vector<std::exception_ptr> errors(params.size());
  const int n = static_cast<int>(params.size());
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
  for (int i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = modal_sweep(params[static_cast<std::size_t>(i)], sigma_grid);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string sweep_csv(const std::string& parameter, const std::vector<SweepPoint>& points,
                      const std::vector<RunResult>& results) {
  std::ostringstream out;
  out << "point,parameter,value,window,sigma_mean,rms_theta,rms_alpha,peak_theta,peak_alpha,"
         "transmissibility,tracking_rms,peak_tracking,omega_n_low_sigma1,omega_n_high_sigma1\n";
  char buf[48];
  auto f = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    const RunSummary& s = results[i].summary;
    const ModalPoint& rigid = s.modal.back();
    for (const auto& w : s.windows) {
      out << i << ',' << parameter << ',' << f(points[i].value) << ',' << w.label << ',' << f(w.sigma_mean)
          << ',' << f(w.rms_theta) << ',' << f(w.rms_alpha) << ',' << f(w.peak_theta) << ','
          << f(w.peak_alpha) << ',' << f(w.transmissibility) << ',' << f(w.tracking_rms) << ','
          << f(w.peak_tracking) << ',' << f(rigid.modes[0].omega_n) << ',' << f(rigid.modes[1].omega_n)
          << '\n';
    }
  }
  return out.str();
}

}  // namespace vsl
