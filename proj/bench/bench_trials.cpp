// Serial reference against the OpenMP path for the three Monte Carlo kernels.
// Both paths produce identical numbers; only wall time differs.

#include <benchmark/benchmark.h>

#include "levyshrink/condgauss.hpp"
#include "levyshrink/oulevy.hpp"
#include "levyshrink/regression.hpp"
#include "levyshrink/trials.hpp"

namespace {

using namespace levyshrink;

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void BM_CondGaussSweep(benchmark::State& state) {
  const int p = 5;
  const auto source = CovarianceSource::fixed(0.5 * Matrix::Identity(p, p));
  const auto cfg = ShrinkageConfig::theorem21(p, 2.0, 0.5, 0.5);
  const auto grid = ball_grid(p, 2.0);
  for (auto _ : state) {
    auto sweep = sup_delta_over_grid(source, cfg, grid, 100000, 1, mode(state));
    benchmark::DoNotOptimize(sweep.worst_delta);
  }
  state.SetItemsProcessed(state.iterations() * 100000);
}

void BM_BasisIntegrals(benchmark::State& state) {
  const TrigBasis basis(3);
  const NoiseParams params{-1.0, 1.0, 0.7, 1.0};
  for (auto _ : state) {
    auto m = accumulate_trials(
        2048, 3,
        [&](std::uint64_t i, std::span<double> out) {
          Engine rng = substream(1, i);
          const Vector v = basis_integrals(params, basis, 5, 1e-3, rng);
          for (int j = 0; j < 3; ++j) out[j] = v[j];
        },
        mode(state));
    benchmark::DoNotOptimize(m.front().mean());
  }
  state.SetItemsProcessed(state.iterations() * 2048);
}

void BM_Lemma55(benchmark::State& state) {
  const TrigBasis basis(5);
  const NoiseParams params{-1.0, 1.0, 0.7, 2.0};
  for (auto _ : state) {
    auto r = check_lemma_55(basis, params, 10, 64, 1, mode(state));
    benchmark::DoNotOptimize(r.mean_lambda_max);
  }
  state.SetItemsProcessed(state.iterations() * 64);
}

}  // namespace

BENCHMARK(BM_CondGaussSweep)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BasisIntegrals)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lemma55)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
