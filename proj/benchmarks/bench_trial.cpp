#include <benchmark/benchmark.h>

#include "rissim/montecarlo.hpp"

using namespace rissim;

static void BM_Trial(benchmark::State& state) {
  SystemConfig cfg = SystemConfig::defaults();
  const int side = static_cast<int>(state.range(0));
  cfg.m_h = cfg.m_v = side;
  cfg.finalize();
  const McContext ctx(cfg, 1);
  const std::vector<int> symbols{1, 10, 50, 96};
  std::int64_t t = 0;
  for (auto _ : state) {
    auto out = ctx.run_trial(t++, symbols);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Trial)->Arg(4)->Arg(8)->Arg(16);
