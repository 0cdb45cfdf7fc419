#include <benchmark/benchmark.h>

#include <random>

#include "mtbounds/bounds.hpp"
#include "mtbounds/frequency.hpp"
#include "mtbounds/inference.hpp"
#include "mtbounds/simlab.hpp"

namespace {

using namespace mtbounds;

Scenario bench_scenario(int waves) {
  Scenario sc;
  for (int w = 0; w < waves; ++w) sc.waves.push_back(2000 + w);
  sc.initial_prevalence = 0.3;
  sc.infection_hazard.assign(static_cast<std::size_t>(waves - 1), 0.05);
  for (int w = 0; w < waves; ++w) {
    sc.missingness.push_back(MissingnessKernel::uniform({0.6, 0.3, 0.1}));
  }
  sc.mar_holds = true;
  return sc;
}

void BM_Frequencies(benchmark::State& state) {
  const auto sc = bench_scenario(3);
  const Panel panel = generate(sc, static_cast<std::size_t>(state.range(0)), 1);
  const auto ip = classify(panel, sc.classification());
  for (auto _ : state) {
    benchmark::DoNotOptimize(frequencies(ip, 1, 1, 1));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Frequencies)->Arg(2000)->Arg(100000);

void BM_LongitudinalBounds(benchmark::State& state) {
  const auto sc = bench_scenario(3);
  const auto ft = population_table(sc, 1, 1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(longitudinal_bounds(ft));
  }
}
BENCHMARK(BM_LongitudinalBounds);

void BM_BootstrapTerms(benchmark::State& state) {
  const auto sc = bench_scenario(2);
  const Panel panel = generate(sc, 2000, 2);
  const auto ip = classify(panel, sc.classification());
  for (auto _ : state) {
    benchmark::DoNotOptimize(bootstrap_terms(ip, {0, 0, 1}, static_cast<int>(state.range(0)), 7));
  }
}
BENCHMARK(BM_BootstrapTerms)->Arg(200)->Arg(1000);

void BM_SolveC(benchmark::State& state) {
  double gap = 0.0;
  for (auto _ : state) {
    gap += 1e-6;
    benchmark::DoNotOptimize(solve_c(gap, 0.04, 0.05));
  }
}
BENCHMARK(BM_SolveC);

void BM_OracleRange(benchmark::State& state) {
  const auto sc = bench_scenario(3);
  const auto ft = population_table(sc, 1, 1, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_range(ft, 1e-3));
  }
}
BENCHMARK(BM_OracleRange);

}  // namespace

BENCHMARK_MAIN();
