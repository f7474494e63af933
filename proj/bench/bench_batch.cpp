// Serial reference vs OpenMP batch kernels.
#include <benchmark/benchmark.h>

#include "vsl/scenario.hpp"
#include "vsl/sweep.hpp"

namespace {

std::vector<vsl::Scenario> fan_grid(int points) {
  std::vector<double> grid;
  for (int i = 0; i < points; ++i) grid.push_back(static_cast<double>(i) / (points - 1));
  const auto pts = vsl::expand_sweep(vsl::read_document(VSL_SCENARIO_DIR "/fan_test.scenario"), "sigma", grid, "fan");
  std::vector<vsl::Scenario> out;
  for (const auto& p : pts) out.push_back(p.scenario);
  return out;
}

std::vector<vsl::ModelParams> param_grid(int n) {
  std::vector<vsl::ModelParams> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)].k_max = 10.0 + 5.0 * i;
  return out;
}

std::vector<double> sigma_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 100; ++i) g.push_back(i / 100.0);
  return g;
}

void BM_RunBatchSerial(benchmark::State& state) {
  const auto sc = fan_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vsl::run_batch_serial(sc));
}

void BM_RunBatchParallel(benchmark::State& state) {
  const auto sc = fan_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vsl::run_batch_parallel(sc));
}

void BM_ModalBatchSerial(benchmark::State& state) {
  const auto ps = param_grid(static_cast<int>(state.range(0)));
  const auto g = sigma_grid();
  for (auto _ : state) benchmark::DoNotOptimize(vsl::modal_batch_serial(ps, g));
}

void BM_ModalBatchParallel(benchmark::State& state) {
  const auto ps = param_grid(static_cast<int>(state.range(0)));
  const auto g = sigma_grid();
  for (auto _ : state) benchmark::DoNotOptimize(vsl::modal_batch_parallel(ps, g));
}

}  // namespace

BENCHMARK(BM_RunBatchSerial)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunBatchParallel)->Arg(5)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModalBatchSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ModalBatchParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
