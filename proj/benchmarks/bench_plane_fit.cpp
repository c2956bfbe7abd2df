#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "voxplane/plane_fit.hpp"

using namespace voxplane;

// the Fig.-9 comparison: clusters x iterations x points, with and without
// cluster-level parallelization
static void BM_FitPlanesClusterParallel(benchmark::State& state) {
  const auto clusters =
      bench::synthetic_clusters(static_cast<int>(state.range(0)), 20000, 6);
  RansacParams params;
  params.seed = 7;
  params.execution = RansacExecution::ClusterParallel;
  for (auto _ : state) benchmark::DoNotOptimize(fit_planes(clusters, params));
}
BENCHMARK(BM_FitPlanesClusterParallel)
    ->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Arg(16)
    ->Unit(benchmark::kMillisecond);

static void BM_FitPlanesPerCluster(benchmark::State& state) {
  const auto clusters =
      bench::synthetic_clusters(static_cast<int>(state.range(0)), 20000, 6);
  RansacParams params;
  params.seed = 7;
  params.execution = RansacExecution::PerClusterSerial;
  for (auto _ : state) benchmark::DoNotOptimize(fit_planes(clusters, params));
}
BENCHMARK(BM_FitPlanesPerCluster)
    ->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Arg(16)
    ->Unit(benchmark::kMillisecond);
