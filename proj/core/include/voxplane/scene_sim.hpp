#pragma once

#include <cstdint>
#include <vector>

#include "voxplane/polygonize.hpp"
#include "voxplane/types.hpp"

namespace voxplane {

/// Axis-aligned box primitive.
struct Box {
  Vec3 min;
  Vec3 max;
};

/// Oriented rectangle: spans pose.R * (+-half_u, +-half_v, 0) + t, surface
/// normal along pose.R.col(2). Two-sided; rays hit either face.
struct Rect {
  Pose pose;
  double half_u = 0.5;
  double half_v = 0.5;
};

/// Synthetic scene: primitives plus ground-truth planar regions. Truth
/// regions reuse the polygon record; region id lives in plane.cluster_label.
struct Scene {
  std::vector<Box> boxes;
  std::vector<Rect> rects;
  std::vector<PlanePolygon> ground_truth;
};

enum class SceneKind { Stair5, SingleStage, Overhang, SmallObstacle };

struct SceneParams {
  double stair_rise = 0.17;
  double stair_run = 0.29;
  double stair_width = 1.2;
  double approach_length = 1.2;      // floor strip ahead of the stair
  double floor_size = 0.88;          // SingleStage floor edge length
  double stage_size = 0.40;          // SingleStage platform depth (x extent)
  double stage_height = 0.20;
  double overhang_floor_x = 1.4;     // Overhang floor extents
  double overhang_floor_y = 0.9;
  double overhang_clearance = 0.5;
  double overhang_depth = 0.4;       // overhead slab x extent (full width in y)
  Vec3 obstacle_size = Vec3(0.07, 0.10, 0.08);
  Vec3 obstacle_center_xy = Vec3(0.3, 0.0, 0.0);
  double obstacle_floor_size = 1.2;
};

Scene build_scene(SceneKind kind, const SceneParams& params = {});

struct SensorSpec {
  enum class Kind { PinholeDepth, RayPattern };
  Kind kind = Kind::PinholeDepth;
  // pinhole
  int width = 720;
  int height = 480;
  double hfov_deg = 87.0;
  double vfov_deg = 58.0;
  // ray pattern: unit directions in the sensor frame, cast once per frame
  std::vector<Vec3f> pattern;
  double rate_hz = 30.0;
  double max_range = 10.0;
  double noise_sigma = 0.003;  // range noise, clamped at +-3 sigma
};

/// Lissajous-style rosette covering a forward cone, n rays per scan period.
std::vector<Vec3f> make_rosette_pattern(int n, double cone_deg = 70.0,
                                        double freq_ratio = 7.96);
/// Near-uniform full-sphere Fibonacci pattern.
std::vector<Vec3f> make_spherical_pattern(int n);

/// Cast one frame: per pixel/direction ray-primitive intersection, nearest
/// hit within max_range, Gaussian range noise (clamped at 3 sigma) from the
/// stream keyed by (seed, frame_index, ray index). Misses are dropped;
/// points are emitted in ray order. The returned pose is quantized through
/// the frame-file precision so live and replayed runs match exactly.
SensorFrame render_frame(const Scene& scene, const SensorSpec& sensor, const Pose& pose,
                         std::uint64_t seed, std::uint64_t frame_index);

enum class TrajectoryKind { Straight, Orbit, StairAscent };

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::Straight;
  double duration_s = 5.0;
  double rate_hz = 20.0;
  // Straight / StairAscent: start -> end, pitch interpolated
  Vec3 start = Vec3(-1.0, 0.0, 0.5);
  Vec3 end = Vec3(0.0, 0.0, 0.5);
  double pitch_start_deg = -25.0;
  double pitch_end_deg = -25.0;
  // Orbit: circle around center at given radius/height, aimed at center
  Vec3 center = Vec3::Zero();
  double radius = 0.5;
  double height = 0.5;
  double start_angle_deg = 0.0;
  double revolutions = 1.0;
  // StairAscent: climb profile
  double stair_rise = 0.17;
  double stair_run = 0.29;
  double stair_x0 = 0.0;  // x where the first riser stands
};

/// Smooth deterministic pose sequence at spec.rate_hz; duration 0 gives an
/// empty list. Sensor frame is +x forward, +y left, +z up.
std::vector<Pose> scripted_trajectory(const TrajectorySpec& spec);

/// Pose at position p with forward direction f (unit not required).
Pose look_pose(const Vec3& position, const Vec3& forward);

}  // namespace voxplane
