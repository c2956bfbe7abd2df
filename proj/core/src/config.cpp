#include "voxplane/config.hpp"

#include <fstream>

#include <json.hpp>

namespace voxplane {

namespace {

using nlohmann::json;

// fetch field if present, with type/range checks
template <typename T>
void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

void get_vec3i(const json& j, const char* key, Vec3i& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3)
    throw ConfigError(std::string("config: '") + key + "' must be a 3-element array");
  for (int k = 0; k < 3; ++k) out[k] = v[k].get<int>();
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigError(std::string("config: ") + what + " must be positive");
}

}  // namespace

SceneKind scene_kind_from_string(const std::string& name) {
  if (name == "stair5") return SceneKind::Stair5;
  if (name == "single_stage") return SceneKind::SingleStage;
  if (name == "overhang") return SceneKind::Overhang;
  if (name == "small_obstacle") return SceneKind::SmallObstacle;
  throw ConfigError("config: unknown scene kind '" + name + "'");
}

std::string to_string(SceneKind kind) {
  switch (kind) {
    case SceneKind::Stair5: return "stair5";
    case SceneKind::SingleStage: return "single_stage";
    case SceneKind::Overhang: return "overhang";
    case SceneKind::SmallObstacle: return "small_obstacle";
  }
  return "?";
}

PipelineConfig default_config() {
  PipelineConfig c;
  // desk-scale sensor: dense enough for 0.01 m voxels, cheap enough for CI
  c.sensor.width = 320;
  c.sensor.height = 240;
  c.sensor.hfov_deg = 87.0;
  c.sensor.vfov_deg = 58.0;
  c.sensor.max_range = 4.0;
  c.sensor.noise_sigma = 0.003;
  c.sensor.rate_hz = 20.0;
  return c;
}

PipelineConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingInputError("config: cannot open " + path);

  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse error in ") + path + ": " + e.what());
  }

  PipelineConfig c = default_config();
  if (j.contains("scene")) {
    const json& s = j["scene"];
    std::string kind = to_string(c.scene_kind);
    get(s, "kind", kind);
    c.scene_kind = scene_kind_from_string(kind);
    get(s, "stair_rise", c.scene.stair_rise);
    get(s, "stair_run", c.scene.stair_run);
    get(s, "stair_width", c.scene.stair_width);
    get(s, "floor_size", c.scene.floor_size);
    get(s, "stage_size", c.scene.stage_size);
    get(s, "stage_height", c.scene.stage_height);
    get(s, "overhang_clearance", c.scene.overhang_clearance);
    get(s, "overhang_depth", c.scene.overhang_depth);
    get(s, "obstacle_floor_size", c.scene.obstacle_floor_size);
    if (s.contains("obstacle_size")) {
      const auto& v = s["obstacle_size"];
      if (!v.is_array() || v.size() != 3)
        throw ConfigError("config: scene.obstacle_size must be a 3-element array");
      for (int k = 0; k < 3; ++k) c.scene.obstacle_size[k] = v[k].get<double>();
    }
  }
  if (j.contains("sensor")) {
    const json& s = j["sensor"];
    get(s, "kind", c.sensor_kind);
    if (c.sensor_kind != "pinhole" && c.sensor_kind != "rosette" && c.sensor_kind != "sphere")
      throw ConfigError("config: sensor.kind must be pinhole, rosette, or sphere");
    get(s, "width", c.sensor.width);
    get(s, "height", c.sensor.height);
    get(s, "hfov_deg", c.sensor.hfov_deg);
    get(s, "vfov_deg", c.sensor.vfov_deg);
    get(s, "rays", c.pattern_rays);
    get(s, "max_range", c.sensor.max_range);
    get(s, "noise_sigma", c.sensor.noise_sigma);
    get(s, "rate_hz", c.sensor.rate_hz);
    if (c.sensor.hfov_deg <= 0.0 || c.sensor.hfov_deg >= 180.0 || c.sensor.vfov_deg <= 0.0 ||
        c.sensor.vfov_deg >= 180.0)
      throw ConfigError("config: sensor FOV must lie in (0, 180) degrees");
    if (c.sensor.noise_sigma < 0.0)
      throw ConfigError("config: sensor.noise_sigma must be non-negative");
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    get(g, "resolution", c.grid_resolution);
    get_vec3i(g, "extent", c.grid_extent);
    require_positive(c.grid_resolution, "grid.resolution");
    if ((c.grid_extent.array() <= 0).any())
      throw ConfigError("config: grid.extent must be positive");
  }
  if (j.contains("segmentation")) {
    const json& s = j["segmentation"];
    get(s, "neighbor_radius", c.segmentation.neighbor_radius);
    get(s, "min_neighbors", c.segmentation.min_neighbors);
    get(s, "max_angle_deg", c.segmentation.max_angle_deg);
    get(s, "adjacency_angle_deg", c.segmentation.adjacency_angle_deg);
    get(s, "distance_th", c.segmentation.distance_th);
    get(s, "min_cluster_size", c.segmentation.min_cluster_size);
    require_positive(c.segmentation.distance_th, "segmentation.distance_th");
    require_positive(c.segmentation.max_angle_deg, "segmentation.max_angle_deg");
    if (c.segmentation.neighbor_radius < 1)
      throw ConfigError("config: segmentation.neighbor_radius must be >= 1");
  }
  if (j.contains("ransac")) {
    const json& r = j["ransac"];
    get(r, "iterations", c.ransac.iterations);
    get(r, "inlier_eps", c.ransac.inlier_eps);
    if (c.ransac.iterations < 1) throw ConfigError("config: ransac.iterations must be >= 1");
    require_positive(c.ransac.inlier_eps, "ransac.inlier_eps");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    get(o, "dir", c.output.dir);
    get(o, "per_frame_polygons", c.output.per_frame_polygons);
    get(o, "timing_csv", c.output.timing_csv);
    get(o, "emit_frames", c.output.emit_frames);
    get(o, "dump_labels", c.output.dump_labels);
    get(o, "min_polygon_area", c.output.min_polygon_area);
  }
  if (j.contains("run")) {
    const json& r = j["run"];
    get(r, "frames", c.run.frames);
    get(r, "seed", c.run.seed);
    get(r, "threads", c.run.threads);
    get(r, "baseline", c.run.baseline);
    get(r, "refine", c.run.refine);
    if (c.run.frames < 0) throw ConfigError("config: run.frames must be non-negative");
  }
  c.ransac.seed = c.run.seed;
  return c;
}

SensorSpec resolve_sensor(const PipelineConfig& config) {
  SensorSpec spec = config.sensor;
  if (config.sensor_kind == "pinhole") {
    spec.kind = SensorSpec::Kind::PinholeDepth;
  } else {
    spec.kind = SensorSpec::Kind::RayPattern;
    spec.pattern = config.sensor_kind == "rosette"
                       ? make_rosette_pattern(config.pattern_rays)
                       : make_spherical_pattern(config.pattern_rays);
  }
  return spec;
}

}  // namespace voxplane
