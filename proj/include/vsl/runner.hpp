#pragma once

#include <vector>

#include "vsl/metrics.hpp"
#include "vsl/scenario.hpp"
#include "vsl/telemetry.hpp"

namespace vsl {

struct RunResult {
  std::vector<TelemetryRecord> records;
  RunSummary summary;
};

/// Runs the timeline to completion. Records the initial sample, then every
/// scenario.decimate steps. Validity breaches are counted, never fatal.
RunResult run(const Scenario& scenario);

}  // namespace vsl
