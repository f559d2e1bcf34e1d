#include <benchmark/benchmark.h>

#include <vector>

#include "honeygame/learn.hpp"
#include "honeygame/oracle.hpp"
#include "honeygame/rng.hpp"
#include "honeygame/solver.hpp"

using namespace honeygame;

namespace {

Population even_population(int n) {
  std::vector<UavType> types;
  for (int k = 0; k < n; ++k) {
    UavType t;
    t.index = k + 1;
    t.marginal_cost = 1.0 - 0.99 * k / std::max(1, n - 1);
    t.delay = 0.5 + 0.9 * ((k * 7) % n) / n;
    types.push_back(t);
  }
  return Population(std::move(types));
}

GcsParams params_for(int n) {
  GcsParams p;
  p.budget = 46.0 * n;
  return p;
}

void BM_SolveComplete(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pop = even_population(n);
  const auto params = params_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_complete(pop, params));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolveComplete)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_SolvePartial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pop = even_population(n);
  const auto params = params_for(n);
  for (auto _ : state) benchmark::DoNotOptimize(solver::solve_partial(pop, params));
  state.SetComplexityN(n);
}
BENCHMARK(BM_SolvePartial)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_Iron(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto pop = even_population(n);
  const auto params = params_for(n);
  const auto parts = participating_set(pop, params.t_max);
  const auto relaxed = solver::solve_partial_relaxed(pop, params);
  const solver::SolverConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solver::iron(relaxed.sizes, relaxed, parts, params, cfg));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Iron)->RangeMultiplier(4)->Range(4, 1024)->Complexity();

void BM_OracleThreeTypes(benchmark::State& state) {
  const auto pop = even_population(3);
  const auto params = params_for(3);
  const auto grid = oracle::default_grid(3, params.s_max);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::grid_search_partial(pop, params, grid));
}
BENCHMARK(BM_OracleThreeTypes)->Unit(benchmark::kMillisecond);

void BM_DynamicGameSingleType(benchmark::State& state) {
  const auto pop = even_population(1);
  learn::LearnConfig cfg;
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(learn::run_dynamic_game(pop, GcsParams{}, cfg, seed++));
}
BENCHMARK(BM_DynamicGameSingleType)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
