#include <benchmark/benchmark.h>

#include "orgnorms/experiment.hpp"
#include "orgnorms/landscape.hpp"

namespace {

orgnorms::Coupling coupling_for(int level) {
  switch (level) {
    case 0: return orgnorms::kInternal.coupling;
    case 1: return orgnorms::kLow.coupling;
    case 2: return orgnorms::kModerate.coupling;
    default: return orgnorms::kHigh.coupling;
  }
}

void BM_SampleLandscape(benchmark::State& state) {
  const auto structure = orgnorms::build_structure(4, 4, coupling_for(static_cast<int>(state.range(0))));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    auto lsc = orgnorms::sample_landscape(structure, 0.3, seed++);
    benchmark::DoNotOptimize(lsc.global_max());
  }
}
BENCHMARK(BM_SampleLandscape)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_GlobalMax(benchmark::State& state) {
  const auto structure = orgnorms::build_structure(4, 4, coupling_for(static_cast<int>(state.range(0))));
  const auto lsc = orgnorms::sample_landscape(structure, 0.3, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(orgnorms::compute_global_max(lsc));
  }
}
BENCHMARK(BM_GlobalMax)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_RunOnce(benchmark::State& state) {
  orgnorms::Scenario scn;
  scn.complexity = orgnorms::complexity_for(coupling_for(static_cast<int>(state.range(0))));
  scn.weights = {0.5, 0.5};
  scn.scheme = {0.5, 0.5};
  scn.base_seed = orgnorms::scenario_seed(scn);
  int r = 0;
  for (auto _ : state) {
    auto result = orgnorms::run_once(scn, r++);
    benchmark::DoNotOptimize(result.phi.back());
  }
}
BENCHMARK(BM_RunOnce)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
