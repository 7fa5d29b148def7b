#include "iadof/chain.hpp"
#include "iadof/channels.hpp"
#include "iadof/feasibility.hpp"
#include "iadof/synth.hpp"

#include <benchmark/benchmark.h>

using namespace iadof;

static void BM_DofUpperGrid(benchmark::State& state) {
  const std::int64_t G = state.range(0), K = state.range(1);
  for (auto _ : state) {
    for (std::int64_t M = 1; M <= 30; ++M) {
      for (std::int64_t N = 1; N <= 30; ++N) benchmark::DoNotOptimize(dof_upper({G, K, M, N}));
    }
  }
  state.SetItemsProcessed(state.iterations() * 900);
}
BENCHMARK(BM_DofUpperGrid)->Args({3, 1})->Args({3, 2})->Args({5, 4});

static void BM_GenieBound(benchmark::State& state) {
  const SystemConfig cfg{3, 2, state.range(0), state.range(1)};
  for (auto _ : state) benchmark::DoNotOptimize(genie_bound_recursive(cfg));
}
BENCHMARK(BM_GenieBound)->Args({7, 2})->Args({38, 11})->Args({59, 17});

static void BM_FeasibleLinear(benchmark::State& state) {
  const SystemConfig cfg{4, 3, state.range(0), state.range(1)};
  for (auto _ : state) benchmark::DoNotOptimize(feasible_linear(cfg, Rat(2)));
}
BENCHMARK(BM_FeasibleLinear)->Args({20, 5})->Args({60, 13});

static void BM_Synthesize(benchmark::State& state) {
  const SystemConfig cfgs[] = {{3, 1, 5, 7}, {3, 2, 24, 6}, {3, 2, 11, 3}};
  const SystemConfig cfg = cfgs[state.range(0)];
  const ChannelSet ch = gen_channels(cfg, 0);
  aligned_matrix_specs(cfg);  // warm the spec cache
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(cfg, ch));
  state.SetLabel(std::to_string(cfg.G) + "," + std::to_string(cfg.K) + "," + std::to_string(cfg.M) + "," +
                 std::to_string(cfg.N));
}
BENCHMARK(BM_Synthesize)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
