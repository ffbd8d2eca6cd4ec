#include <benchmark/benchmark.h>

#include <cmath>

#include "clustersense/detector.hpp"
#include "clustersense/mcsim.hpp"
#include "clustersense/planner.hpp"
#include "clustersense/specfun.hpp"

namespace cs = clustersense;

static void BM_MarcumQ(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const double a = std::sqrt(2.0 * m);
  const double b = std::sqrt(2.0 * m + 4.0);
  for (auto _ : state) benchmark::DoNotOptimize(cs::specfun::marcum_q(m, a, b));
}
BENCHMARK(BM_MarcumQ)->Arg(1)->Arg(5)->Arg(20)->Arg(200);

static void BM_ThresholdForPd(benchmark::State& state) {
  const cs::SuProfile su{1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(cs::threshold_for_pd(su, 0.9));
}
BENCHMARK(BM_ThresholdForPd)->Arg(5)->Arg(20);

static void BM_OptimizeClusterSize(benchmark::State& state) {
  cs::ScenarioConfig s;
  s.sensing_symbols = static_cast<int>(state.range(0));
  s.mean_snr = cs::db_to_linear(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(cs::optimize_cluster_size(s));
}
BENCHMARK(BM_OptimizeClusterSize)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloSu(benchmark::State& state) {
  const cs::SuProfile su{1.0, static_cast<int>(state.range(0))};
  const double lambda = cs::threshold_for_pd(su, 0.9).threshold;
  cs::McConfig mc;
  mc.trials = 100'000;
  mc.hypothesis = cs::Hypothesis::H1;
  for (auto _ : state) benchmark::DoNotOptimize(cs::estimate_su_probs(su, lambda, mc));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mc.trials));
}
BENCHMARK(BM_MonteCarloSu)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
