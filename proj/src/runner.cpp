#include "vsl/runner.hpp"

#include "vsl/simulation.hpp"

namespace vsl {

RunResult run(const Scenario& scenario) {
  Simulation sim(scenario);
  RunResult out;
  const auto decimate = static_cast<std::uint64_t>(scenario.decimate);
  out.records.reserve(static_cast<std::size_t>(sim.total_steps() / decimate + 2));
  out.records.push_back(sim.record());
  while (!sim.finished()) {
    sim.advance();
    if (sim.step_index() % decimate == 0) out.records.push_back(sim.record());
  }
  out.summary = summarize(sim.scenario(), out.records, sim.validity_breaches());
  return out;
}

}  // namespace vsl
