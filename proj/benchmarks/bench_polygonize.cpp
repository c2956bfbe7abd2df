#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "voxplane/polygonize.hpp"
#include "voxplane/rng.hpp"

using namespace voxplane;

namespace {

std::vector<Vec2> disk_points(int n) {
  CounterRng rng(8);
  std::vector<Vec2> pts(n);
  for (auto& p : pts) {
    const double r = std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, 2.0 * M_PI);
    p = Vec2(r * std::cos(a), r * std::sin(a));
  }
  return pts;
}

}  // namespace

static void BM_HullWithFilter(benchmark::State& state) {
  const auto pts = disk_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convex_hull(pts));
}
BENCHMARK(BM_HullWithFilter)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);

static void BM_HullRawChain(benchmark::State& state) {
  const auto pts = disk_points(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(monotone_chain(pts));
}
BENCHMARK(BM_HullRawChain)->Arg(10000)->Arg(100000)->Unit(benchmark::kMicrosecond);
