#include <benchmark/benchmark.h>

#include "rissim/correlation.hpp"
#include "rissim/geometry.hpp"

using namespace rissim;

static void BM_BuildCorrelation(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const double lambda = 0.15;
  const auto pos = ris_element_positions(side, side, lambda / 2, lambda / 2);
  for (auto _ : state) {
    auto c = build_correlation(pos, lambda);
    benchmark::DoNotOptimize(c);
  }
  state.SetComplexityN(side * side);
}
BENCHMARK(BM_BuildCorrelation)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Complexity();

static void BM_CorrelatedSample(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const double lambda = 0.15;
  const auto corr =
      build_correlation(ris_element_positions(side, side, lambda / 2, lambda / 2), lambda);
  RngStream rng(1);
  VecC w(corr.dim()), out(corr.dim());
  for (auto _ : state) {
    corr.sample_into(1.0, rng, w, out);
    benchmark::DoNotOptimize(out);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CorrelatedSample)->Arg(4)->Arg(8)->Arg(16)->Arg(32);
