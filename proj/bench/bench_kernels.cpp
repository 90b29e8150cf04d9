#include <benchmark/benchmark.h>

#include <random>

#include "cstop/equilibrium.hpp"

using namespace cstop;

namespace {

GridFunction noisy(std::size_t n) {
  auto grid = build_grid(n, 1e-4);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::sin(9.0 * grid->points[k]) + 0.05 * z(rng);
  return GridFunction(grid, v);
}

GameSpec bench_game(std::size_t n) {
  GameSpec g;
  g.prior = 0.4;
  g.grid.n = n;
  g.players = {{PiecewiseLinearSpec::continuous({0, 0.3, 0.7, 1}, {0.1, 0.8, 0.5, 1.0}), CostSpec::constant(0.05)},
               {PiecewiseLinearSpec::continuous({0, 0.5, 1}, {1.0, 0.2, 0.9}), CostSpec::constant(0.08)}};
  g.rule = unilateral_rule(2);
  return g;
}

}  // namespace

static void BM_ClosureKernel(benchmark::State& state) {
  auto f = noisy(static_cast<std::size_t>(state.range(0)));
  auto region = SamplingRegion::interval(f.grid, f.size() / 4, 3 * f.size() / 4);
  for (auto _ : state) benchmark::DoNotOptimize(closure_out(f, region));
}
BENCHMARK(BM_ClosureKernel)->Arg(512)->Arg(4096);

static void BM_Enumerate(benchmark::State& state) {
  auto game = prepare_game(bench_game(static_cast<std::size_t>(state.range(0))));
  const Exec exec = state.range(1) ? Exec::parallel : Exec::serial;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_interval_equilibria(game, EnumScope::single, exec));
}
BENCHMARK(BM_Enumerate)->Args({128, 0})->Args({128, 1})->Args({256, 0})->Args({256, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
