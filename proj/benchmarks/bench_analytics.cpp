#include <benchmark/benchmark.h>

#include "rissim/experiments.hpp"

using namespace rissim;

static void BM_SumSpectralEfficiency(benchmark::State& state) {
  SystemConfig cfg = SystemConfig::defaults();
  cfg.m_h = cfg.m_v = static_cast<int>(state.range(0));
  cfg.finalize();
  for (auto _ : state) {
    auto se = analytic_se_per_ue(cfg);
    benchmark::DoNotOptimize(se);
  }
}
BENCHMARK(BM_SumSpectralEfficiency)->Arg(4)->Arg(8)->Arg(16);
