// Batch execution of independent runs. `*_serial` is the reference; the
// OpenMP kernels must produce bit-identical results.
#pragma once

#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "vsl/runner.hpp"
#include "vsl/scenario.hpp"

namespace vsl {

struct SweepPoint {
  double value = 0.0;
  Scenario scenario;
};

/// One scenario per grid value, `parameter` patched into a copy of `base`
/// (`sigma` for constant stiffness). Throws SchemaError/ValidationError.
std::vector<SweepPoint> expand_sweep(const YAML::Node& base, const std::string& parameter,
                                     const std::vector<double>& grid, const std::string& source);

std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios);
std::vector<RunResult> run_batch_parallel(const std::vector<Scenario>& scenarios, int threads = 0);

std::vector<std::vector<ModalPoint>> modal_batch_serial(const std::vector<ModelParams>& params,
                                                        const std::vector<double>& sigma_grid);
std::vector<std::vector<ModalPoint>> modal_batch_parallel(const std::vector<ModelParams>& params,
                                                          const std::vector<double>& sigma_grid,
                                                          int threads = 0);

/// Long table: one row per (point, window).
std::string sweep_csv(const std::string& parameter, const std::vector<SweepPoint>& points,
                      const std::vector<RunResult>& results);

}  // namespace vsl
