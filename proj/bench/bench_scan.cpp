// Serial reference scan against the OpenMP scan over the same photon energies.

#include <benchmark/benchmark.h>

#include "curvex/config.hpp"
#include "curvex/spectra.hpp"

namespace {

const curvex::ScanSetup& setup() {
  static const curvex::RunConfig config;
  static const curvex::ScanSetup s(config.build_model(), config.resolvent_grid(), 1);
  return s;
}

std::vector<double> energies(std::int64_t n) {
  curvex::ScanWindow w;
  w.step = (w.stop - w.start) / static_cast<double>(n - 1);
  return w.photon_energies();
}

void BM_ScanSerial(benchmark::State& state) {
  const auto e = energies(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(curvex::scan_amplitudes_reference(setup(), e));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ScanParallel(benchmark::State& state) {
  const auto e = energies(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(curvex::scan_amplitudes(setup(), e));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SinglePoint(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(curvex::evaluate_point(setup(), 11000.0));
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Arg(41)->Arg(401)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ScanParallel)->Arg(41)->Arg(401)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SinglePoint)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
