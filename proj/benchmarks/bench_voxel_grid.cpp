#include <benchmark/benchmark.h>

#include "bench_common.hpp"
#include "voxplane/voxel_grid.hpp"

using namespace voxplane;

static void BM_IntegrateFrame(benchmark::State& state) {
  const SensorFrame frame = bench::plane_frame(static_cast<int>(state.range(0)), 0.2, 0.003, 1);
  for (auto _ : state) {
    VoxelGrid grid(0.01, Vec3i(200, 200, 200), Vec3::Zero());
    benchmark::DoNotOptimize(grid.integrate_frame(frame));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntegrateFrame)->Arg(10000)->Arg(76800)->Arg(345600)->Unit(benchmark::kMillisecond);

static void BM_ClearRays(benchmark::State& state) {
  SensorFrame frame = bench::plane_frame(static_cast<int>(state.range(0)), 0.0, 0.0, 2);
  frame.pose.translation = Vec3(0, 0, 0.8);
  VoxelGrid grid(0.01, Vec3i(200, 200, 200), Vec3::Zero());
  grid.integrate_frame(frame);
  for (auto _ : state) benchmark::DoNotOptimize(grid.clear_rays(frame));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ClearRays)->Arg(10000)->Arg(76800)->Unit(benchmark::kMillisecond);

static void BM_Recenter(benchmark::State& state) {
  VoxelGrid grid(0.01, Vec3i(200, 200, 200), Vec3::Zero());
  grid.integrate_frame(bench::plane_frame(100000, 0.2, 0.003, 3));
  double step = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(grid.recenter(grid.world_center() + Vec3(step, 0, 0)));
    step = -step;  // shuttle back and forth
  }
}
BENCHMARK(BM_Recenter)->Unit(benchmark::kMillisecond);
