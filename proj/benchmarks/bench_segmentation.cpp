#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "voxplane/voxel_grid.hpp"

using namespace voxplane;

namespace {

VoxelGrid populated_grid(int points) {
  VoxelGrid grid(0.01, Vec3i(200, 200, 200), Vec3::Zero());
  grid.integrate_frame(bench::plane_frame(points, 0.2, 0.003, 4));
  grid.integrate_frame(bench::plane_frame(points / 2, -0.2, 0.003, 5));
  return grid;
}

}  // namespace

static void BM_EstimateNormals(benchmark::State& state) {
  const VoxelGrid grid = populated_grid(static_cast<int>(state.range(0)));
  const SegmentationParams params;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_normals(grid, params));
  state.counters["occupied"] = static_cast<double>(grid.occupied_count());
}
BENCHMARK(BM_EstimateNormals)->Arg(100000)->Arg(400000)->Unit(benchmark::kMillisecond);

static void BM_ClusterPipeline(benchmark::State& state) {
  VoxelGrid grid = populated_grid(static_cast<int>(state.range(0)));
  const SegmentationParams params;
  const auto estimates = estimate_normals(grid, params);
  const SteppablePartition part = classify_steppable(grid, estimates, params);
  for (auto _ : state) {
    const Adjacency adj = build_adjacency(part.steppable, params, grid.resolution());
    benchmark::DoNotOptimize(label_components(part.steppable, adj));
  }
  state.counters["steppable"] = static_cast<double>(part.steppable.size());
}
BENCHMARK(BM_ClusterPipeline)->Arg(100000)->Arg(400000)->Unit(benchmark::kMillisecond);
