#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "relinfo/design.hpp"
#include "relinfo/montecarlo.hpp"
#include "relinfo/relative_information.hpp"
#include "relinfo/rng.hpp"

namespace {

using namespace relinfo;

void BM_plugin_summary(benchmark::State& state) {
  const StudyConfig cfg(1000, 800, 440, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(plugin_summary(cfg, 200));
  }
}
BENCHMARK(BM_plugin_summary);

void BM_expected_inverse_ri(benchmark::State& state) {
  const StudyConfig cfg(1000, 800, 440, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(expected_inverse_ri(cfg, 0.6, 200));
  }
}
BENCHMARK(BM_expected_inverse_ri);

void BM_exact_conditional_moments(benchmark::State& state) {
  const auto missing = state.range(0);
  const StudyConfig cfg(800 + missing, 800, 440, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exact_conditional_moments(cfg, 0.55));
  }
}
BENCHMARK(BM_exact_conditional_moments)->Arg(200)->Arg(2000)->Arg(20000);

void BM_binomial_sampler_build(benchmark::State& state) {
  for (auto _ : state) {
    BinomialSampler sampler(state.range(0), 0.55);
    benchmark::DoNotOptimize(sampler);
  }
}
BENCHMARK(BM_binomial_sampler_build)->Arg(200)->Arg(1000);

void BM_simulate_joint_lod(benchmark::State& state) {
  const SimConfig cfg(1000, 800, 0.55, 0.5, state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_joint_lod(cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_simulate_joint_lod)->Arg(10000)->Arg(100000);

void BM_conditional_simulate(benchmark::State& state) {
  const StudyConfig cfg(1000, 800, 440, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        conditional_simulate(cfg, 0.55, state.range(0), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_conditional_simulate)->Arg(100000);

std::vector<VariableRecord> bench_variables(int count, bool with_setup) {
  std::mt19937 gen(99);
  std::uniform_int_distribution<std::int64_t> n0_dist(50, 900);
  std::uniform_int_distribution<std::int64_t> mis_dist(5, 120);
  std::uniform_real_distribution<double> unit_dist(0.5, 4.0);
  std::vector<VariableRecord> vars;
  for (int v = 0; v < count; ++v) {
    const std::int64_t n0 = n0_dist(gen);
    const std::int64_t n = n0 + mis_dist(gen);
    const std::int64_t x0 = (n0 * 11) / 20 + 1;
    vars.emplace_back("v" + std::to_string(v), StudyConfig(n, n0, x0, 0.5),
                      unit_dist(gen),
                      with_setup && (v % 2 == 0) ? 25.0 : 0.0);
  }
  return vars;
}

void BM_optimize_exact_no_setup(benchmark::State& state) {
  const DesignProblem problem{
      bench_variables(static_cast<int>(state.range(0)), false), 400.0,
      SolveMode::exact};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_allocation(problem));
  }
}
BENCHMARK(BM_optimize_exact_no_setup)->Arg(8)->Arg(32)->Arg(128);

void BM_optimize_exact_fixed_charge(benchmark::State& state) {
  const DesignProblem problem{
      bench_variables(static_cast<int>(state.range(0)), true), 400.0,
      SolveMode::exact};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_allocation(problem));
  }
}
BENCHMARK(BM_optimize_exact_fixed_charge)->Arg(8)->Arg(16)->Arg(24);

void BM_optimize_greedy(benchmark::State& state) {
  const DesignProblem problem{
      bench_variables(static_cast<int>(state.range(0)), true), 400.0,
      SolveMode::greedy};
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimize_allocation(problem));
  }
}
BENCHMARK(BM_optimize_greedy)->Arg(128);

void BM_sd_curve(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd_curve(1000, 800, 0.5, {0.55, 0.6, 0.7}));
  }
}
BENCHMARK(BM_sd_curve);

}  // namespace

BENCHMARK_MAIN();
