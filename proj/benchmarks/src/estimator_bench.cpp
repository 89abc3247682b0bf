#include "tvyw/estimator.hpp"
#include "tvyw/linalg.hpp"
#include "tvyw/spectral.hpp"
#include "tvyw/tvar.hpp"

#include <benchmark/benchmark.h>

using namespace tvyw;

namespace {

const Series&
sample()
{
  static const Series x = simulate(random_model(3, 5, 0.9, {}, 1), 1 << 20, { 1, 1 << 20 }, kDefaultBurnIn, 2);
  return x;
}

void
BM_TaperedAutocovariance(benchmark::State& state)
{
  const int M = static_cast<int>(state.range(0));
  const Taper h = sine_taper();
  const Series& x = sample();
  for (auto _ : state)
    benchmark::DoNotOptimize(tapered_autocovariance(x, 1 << 19, 1 << 20, M, h, 3));
  state.SetItemsProcessed(state.iterations() * M);
}
BENCHMARK(BM_TaperedAutocovariance)->RangeMultiplier(8)->Range(1 << 8, 1 << 17);

void
BM_RawEstimate(benchmark::State& state)
{
  const int M = static_cast<int>(state.range(0));
  const Taper h = rectangular_taper();
  const Series& x = sample();
  for (auto _ : state)
    benchmark::DoNotOptimize(raw_estimate(x, 1 << 19, 1 << 20, M, h, 3));
  state.SetItemsProcessed(state.iterations() * M);
}
BENCHMARK(BM_RawEstimate)->RangeMultiplier(8)->Range(1 << 8, 1 << 17);

void
BM_BiasReducedEstimate(benchmark::State& state)
{
  const int M = static_cast<int>(state.range(0));
  const Taper h = rectangular_taper();
  const Series& x = sample();
  for (auto _ : state)
    benchmark::DoNotOptimize(bias_reduced_estimate(x, 1 << 19, 1 << 20, M, h, 3, 3.0));
}
BENCHMARK(BM_BiasReducedEstimate)->RangeMultiplier(8)->Range(1 << 8, 1 << 17);

void
BM_LevinsonDurbin(benchmark::State& state)
{
  const int d = static_cast<int>(state.range(0));
  const auto lags = ar_autocovariance({ { 0.5, -0.2, 0.1 }, 1.0 }, d);
  for (auto _ : state)
    benchmark::DoNotOptimize(levinson_durbin(lags.values(), d));
}
BENCHMARK(BM_LevinsonDurbin)->DenseRange(2, 16, 7);

} // namespace
