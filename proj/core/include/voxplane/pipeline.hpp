#pragma once

#include <optional>
#include <string>
#include <vector>

#include "voxplane/config.hpp"
#include "voxplane/metrics.hpp"
#include "voxplane/polygonize.hpp"
#include "voxplane/types.hpp"

namespace voxplane {

/// Per-scene scripted camera path with run.frames poses.
std::vector<Pose> default_trajectory(const PipelineConfig& config);

struct PipelineResult {
  std::vector<PlanePolygon> polygons;  // final frame
  std::optional<IoUReport> iou;        // when ground truth was available
  TimingReport timing;
  std::size_t frames_processed = 0;
  std::string polygons_path;
  std::string iou_report_path;
  std::string timing_csv_path;
};

/// Full run: frames -> clear, integrate, recenter, classify, cluster, fit,
/// polygonize per frame; final polygons, IoU report (when truth is given)
/// and timing CSV land in config.output.dir. Deterministic for a fixed
/// (config, seed) regardless of thread count.
PipelineResult run_frames(const PipelineConfig& config,
                          const std::vector<SensorFrame>& frames,
                          const std::vector<PlanePolygon>* ground_truth);

/// Simulate the configured scene and run the pipeline on the live frames.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Render the configured scene to out_dir: frames.bin (frame stream) and
/// truth.txt (ground-truth polygons with region ids).
struct SimulateResult {
  std::string frames_path;
  std::string truth_path;
  std::size_t frames = 0;
  std::size_t points = 0;
};
SimulateResult simulate_scene(const PipelineConfig& config);

/// Run the pipeline on a recorded frame stream; identical downstream
/// behavior to run_pipeline. Truth file optional (enables the IoU report).
PipelineResult replay_pipeline(const PipelineConfig& config, const std::string& frames_path,
                               const std::string& truth_path = {});

struct AblationRow {
  int clusters = 0;
  int trials = 0;
  // 10% trimmed means over trials: scheduler spikes on shared hardware can
  // be an order of magnitude, and a plain mean of a ~2 ms measurement would
  // report the scheduler, not the algorithm. Medians kept for inspection.
  double parallel_ms = 0.0;
  double serial_ms = 0.0;
  double parallel_median_ms = 0.0;
  double serial_median_ms = 0.0;
};

struct AblationConfig {
  std::vector<int> cluster_counts = {1, 2, 4, 8, 16};
  int trials = 1000;        // reference setting; drop to ~100 for desk scale
  int points_min = 10000;   // M range per trial
  int points_max = 30000;
  std::uint64_t seed = 1234;
  int iterations = 100;
  double inlier_eps = 0.01;
  int threads = 0;
};

/// Fig.-9 style scaling study: per trial draw M in [points_min, points_max],
/// build `clusters` clusters of exactly M synthetic points each, and time
/// fit_planes under both execution modes.
std::vector<AblationRow> run_ablation(const AblationConfig& config);

void write_ablation_csv(const std::string& path, const std::vector<AblationRow>& rows);

}  // namespace voxplane
