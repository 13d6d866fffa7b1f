#include <benchmark/benchmark.h>

#include <vector>

#include "copsurv/copula.hpp"
#include "copsurv/datagen.hpp"
#include "copsurv/likelihood.hpp"
#include "copsurv/metrics.hpp"
#include "copsurv/rng.hpp"

using namespace copsurv;

namespace {

SyntheticData linear_data(std::size_t n) {
  SyntheticGenConfig cfg = preset_linear_risk(1);
  cfg.n = n;
  cfg.copula = CopulaSpec::clayton(2.0);
  return generate_synthetic(cfg);
}

CopulaSpec spec_for(int family) {
  switch (family) {
    case 0: return CopulaSpec::independence();
    case 1: return CopulaSpec::clayton(2.0);
    case 2: return CopulaSpec::frank(5.7);
    default: return CopulaSpec::mixture(5.7, 2.0, 0.5);
  }
}

void BM_LoglikGradient(benchmark::State& state) {
  const auto gen = linear_data(static_cast<std::size_t>(state.range(0)));
  const CopulaSpec spec = spec_for(static_cast<int>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(loglik_gradient(gen.event_truth, gen.censor_truth, spec, gen.data));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LoglikGradient)->ArgsProduct({{5000}, {0, 1, 2, 3}});

void BM_LoglikGradientMlp(benchmark::State& state) {
  const auto gen = linear_data(5000);
  Rng rng(2);
  const WeibullCoxModel ev(4.0, 14.0, RiskFunction::mlp({10, 4, 4, 4, 2, 1}, rng));
  const WeibullCoxModel ce(3.0, 16.0, RiskFunction::mlp({10, 4, 4, 4, 2, 1}, rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(loglik_gradient(ev, ce, CopulaSpec::clayton(2.0), gen.data));
  }
  state.SetItemsProcessed(state.iterations() * 5000);
}
BENCHMARK(BM_LoglikGradientMlp);

void BM_SamplePairs(benchmark::State& state) {
  const CopulaSpec spec = spec_for(static_cast<int>(state.range(0)));
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_pairs(spec, 10000, rng));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SamplePairs)->DenseRange(1, 3);

void BM_GenerateSynthetic(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(linear_data(10000));
}
BENCHMARK(BM_GenerateSynthetic);

void BM_ConcordanceIndex(benchmark::State& state) {
  const auto gen = linear_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(concordance_index(gen.event_truth, gen.data));
}
BENCHMARK(BM_ConcordanceIndex)->Arg(2000)->Arg(10000);

void BM_SurvivalL1(benchmark::State& state) {
  const auto gen = linear_data(2000);
  const WeibullCoxModel est(3.5, 15.0, gen.event_truth.risk());
  for (auto _ : state) benchmark::DoNotOptimize(survival_l1(gen.event_truth, est, gen.data));
}
BENCHMARK(BM_SurvivalL1);

}  // namespace

BENCHMARK_MAIN();
