#pragma once

#include <string>

#include "voxplane/errors.hpp"
#include "voxplane/plane_fit.hpp"
#include "voxplane/scene_sim.hpp"
#include "voxplane/segmentation.hpp"
#include "voxplane/types.hpp"

namespace voxplane {

struct OutputConfig {
  std::string dir = "out";
  bool per_frame_polygons = false;
  bool timing_csv = true;
  bool emit_frames = false;  // also write the rendered frame stream
  bool dump_labels = false;  // labeled steppable points of the final frame
  double min_polygon_area = 0.002;  // m^2
};

struct RunConfig {
  int frames = 100;
  std::uint64_t seed = 1234;
  int threads = 0;        // 0 = VOXPLANE_THREADS or hardware
  bool baseline = false;  // height-map path instead of the voxel pipeline
  bool refine = true;     // least-squares polish of RANSAC winners
};

/// Declarative pipeline configuration; JSON sections scene, sensor, grid,
/// segmentation, ransac, output, run. Every field has a desk-scale default
/// so an empty config is runnable.
struct PipelineConfig {
  SceneKind scene_kind = SceneKind::SingleStage;
  SceneParams scene;

  std::string sensor_kind = "pinhole";  // pinhole | rosette | sphere
  int pattern_rays = 20000;             // rosette / sphere ray count
  SensorSpec sensor;

  double grid_resolution = 0.01;
  Vec3i grid_extent = Vec3i(200, 200, 200);

  SegmentationParams segmentation;
  RansacParams ransac;

  OutputConfig output;
  RunConfig run;
};

PipelineConfig default_config();

/// Parse a JSON config file over the defaults. Throws MissingInputError if
/// the file cannot be opened and ConfigError on malformed content.
PipelineConfig load_config_file(const std::string& path);

SceneKind scene_kind_from_string(const std::string& name);
std::string to_string(SceneKind kind);

/// Resolve sensor_kind / pattern_rays into the concrete SensorSpec.
SensorSpec resolve_sensor(const PipelineConfig& config);

}  // namespace voxplane
