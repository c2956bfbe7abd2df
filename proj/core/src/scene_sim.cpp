#include "voxplane/scene_sim.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "voxplane/frame_io.hpp"
#include "voxplane/parallel.hpp"
#include "voxplane/rng.hpp"

namespace voxplane {
namespace {

PlaneModel plane_through(const Vec3& normal, const Vec3& point) {
  PlaneModel m;
  m.normal = orient_up(normal.normalized(), Vec3::UnitZ());
  m.offset = m.normal.dot(point);
  return m;
}

// Truth region from its corner points; region ids are assigned in
// construction order.
void add_truth(Scene& scene, const Vec3& normal, const std::vector<Vec3>& corners) {
  PlaneModel model = plane_through(normal, corners.front());
  model.cluster_label = static_cast<std::int32_t>(scene.ground_truth.size());
  model.inlier_count = 0;
  auto poly = make_polygon(model, corners);
  if (!poly) throw std::logic_error("scene truth region is degenerate");
  scene.ground_truth.push_back(std::move(*poly));
}

Rect horizontal_rect(const Vec3& center, double half_x, double half_y) {
  Rect r;
  r.pose.rotation = Mat3::Identity();  // normal = +z
  r.pose.translation = center;
  r.half_u = half_x;
  r.half_v = half_y;
  return r;
}

}  // namespace

Scene build_scene(SceneKind kind, const SceneParams& p) {
  Scene scene;
  switch (kind) {
    case SceneKind::Stair5: {
      const double w = 0.5 * p.stair_width;
      // approach floor strip ahead of the first riser
      scene.rects.push_back(horizontal_rect(Vec3(-0.5 * p.approach_length, 0, 0),
                                            0.5 * p.approach_length, w));
      add_truth(scene, Vec3::UnitZ(),
                {{-p.approach_length, -w, 0}, {0, -w, 0}, {0, w, 0}, {-p.approach_length, w, 0}});
      for (int k = 0; k < 5; ++k) {
        const double x0 = k * p.stair_run;
        const double x1 = (k + 1) * p.stair_run;
        const double z1 = (k + 1) * p.stair_rise;
        scene.boxes.push_back({Vec3(x0, -w, 0), Vec3(x1, w, z1)});
        // tread k
        add_truth(scene, Vec3::UnitZ(), {{x0, -w, z1}, {x1, -w, z1}, {x1, w, z1}, {x0, w, z1}});
        // riser k, the face exposed above the previous step
        const double z0 = k * p.stair_rise;
        add_truth(scene, -Vec3::UnitX(), {{x0, -w, z0}, {x0, w, z0}, {x0, w, z1}, {x0, -w, z1}});
      }
      break;
    }
    case SceneKind::SingleStage: {
      const double f = 0.5 * p.floor_size;
      scene.rects.push_back(horizontal_rect(Vec3::Zero(), f, f));
      add_truth(scene, Vec3::UnitZ(), {{-f, -f, 0}, {f, -f, 0}, {f, f, 0}, {-f, f, 0}});
      // platform without side planes: full floor width, flush with the +x
      // floor edge, so the ground it hides sits at the floor boundary and
      // the exposed ground stays a convex region
      const double s = 0.5 * p.stage_size;
      const double cx = f - s;
      const double h = p.stage_height;
      scene.rects.push_back(horizontal_rect(Vec3(cx, 0, h), s, f));
      add_truth(scene, Vec3::UnitZ(),
                {{cx - s, -f, h}, {cx + s, -f, h}, {cx + s, f, h}, {cx - s, f, h}});
      break;
    }
    case SceneKind::Overhang: {
      const double fx = 0.5 * p.overhang_floor_x;
      const double fy = 0.5 * p.overhang_floor_y;
      scene.rects.push_back(horizontal_rect(Vec3::Zero(), fx, fy));
      add_truth(scene, Vec3::UnitZ(), {{-fx, -fy, 0}, {fx, -fy, 0}, {fx, fy, 0}, {-fx, fy, 0}});
      // overhead slab across the far end of the floor, full width
      const double ox = 0.5 * p.overhang_depth;
      const double oy = fy;
      const double cx = fx - ox;
      const double h = p.overhang_clearance;
      scene.rects.push_back(horizontal_rect(Vec3(cx, 0, h), ox, oy));
      add_truth(scene, Vec3::UnitZ(),
                {{cx - ox, -oy, h}, {cx + ox, -oy, h}, {cx + ox, oy, h}, {cx - ox, oy, h}});
      break;
    }
    case SceneKind::SmallObstacle: {
      const double f = 0.5 * p.obstacle_floor_size;
      scene.rects.push_back(horizontal_rect(Vec3::Zero(), f, f));
      add_truth(scene, Vec3::UnitZ(), {{-f, -f, 0}, {f, -f, 0}, {f, f, 0}, {-f, f, 0}});
      const Vec3 half = 0.5 * p.obstacle_size;
      const Vec3 c(p.obstacle_center_xy.x(), p.obstacle_center_xy.y(), 0.0);
      scene.boxes.push_back({c - Vec3(half.x(), half.y(), 0.0),
                             c + Vec3(half.x(), half.y(), p.obstacle_size.z())});
      const double z = p.obstacle_size.z();
      add_truth(scene, Vec3::UnitZ(),
                {{c.x() - half.x(), c.y() - half.y(), z},
                 {c.x() + half.x(), c.y() - half.y(), z},
                 {c.x() + half.x(), c.y() + half.y(), z},
                 {c.x() - half.x(), c.y() + half.y(), z}});
      break;
    }
  }
  return scene;
}

namespace {

constexpr double kRayEps = 1e-9;

// nearest hit distance along unit ray o + t*d, or +inf
double cast_ray(const Scene& scene, const Vec3& o, const Vec3& d, double max_range) {
  double best = std::numeric_limits<double>::infinity();

  for (const Box& box : scene.boxes) {
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    bool miss = false;
    for (int k = 0; k < 3 && !miss; ++k) {
      if (d[k] == 0.0) {
        if (o[k] < box.min[k] || o[k] > box.max[k]) miss = true;
        continue;
      }
      double ta = (box.min[k] - o[k]) / d[k];
      double tb = (box.max[k] - o[k]) / d[k];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) miss = true;
    }
    if (miss) continue;
    const double t = t0 > kRayEps ? t0 : t1;  // inside the box: hit the far face
    if (t > kRayEps && t < best) best = t;
  }

  for (const Rect& rect : scene.rects) {
    const Vec3 n = rect.pose.rotation.col(2);
    const double denom = n.dot(d);
    if (std::abs(denom) < 1e-12) continue;
    const double t = n.dot(rect.pose.translation - o) / denom;
    if (t <= kRayEps || t >= best) continue;
    const Vec3 q = o + t * d - rect.pose.translation;
    if (std::abs(q.dot(rect.pose.rotation.col(0))) <= rect.half_u &&
        std::abs(q.dot(rect.pose.rotation.col(1))) <= rect.half_v)
      best = t;
  }

  return best <= max_range ? best : std::numeric_limits<double>::infinity();
}

}  // namespace

std::vector<Vec3f> make_rosette_pattern(int n, double cone_deg, double freq_ratio) {
  std::vector<Vec3f> dirs(static_cast<std::size_t>(std::max(0, n)));
  const double half = 0.5 * cone_deg * kDegToRad;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / std::max(1, n - 1);
    const double rho = half * std::abs(std::sin(2.0 * M_PI * freq_ratio * s));
    const double phi = 2.0 * M_PI * s * 197.0;  // slow precession fills the disk
    const Vec3 d(std::cos(rho), std::sin(rho) * std::cos(phi), std::sin(rho) * std::sin(phi));
    dirs[i] = d.cast<float>();
  }
  return dirs;
}

std::vector<Vec3f> make_spherical_pattern(int n) {
  std::vector<Vec3f> dirs(static_cast<std::size_t>(std::max(0, n)));
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs[i] = Vec3(r * std::cos(phi), r * std::sin(phi), z).cast<float>();
  }
  return dirs;
}

SensorFrame render_frame(const Scene& scene, const SensorSpec& sensor, const Pose& pose,
                         std::uint64_t seed, std::uint64_t frame_index) {
  const Pose q = quantize_pose(pose);
  if (!is_valid_rotation(q.rotation))
    throw std::invalid_argument("render_frame: pose rotation is not orthonormal");

  std::size_t rays;
  const double tan_h = std::tan(0.5 * sensor.hfov_deg * kDegToRad);
  const double tan_v = std::tan(0.5 * sensor.vfov_deg * kDegToRad);
  if (sensor.kind == SensorSpec::Kind::PinholeDepth) {
    rays = static_cast<std::size_t>(sensor.width) * sensor.height;
  } else {
    rays = sensor.pattern.size();
  }

  const auto ray_dir = [&](std::size_t i) -> Vec3 {
    if (sensor.kind == SensorSpec::Kind::RayPattern)
      return sensor.pattern[i].cast<double>().normalized();
    const int r = static_cast<int>(i) / sensor.width;
    const int c = static_cast<int>(i) % sensor.width;
    const double u = sensor.width > 1 ? 2.0 * c / (sensor.width - 1) - 1.0 : 0.0;
    const double v = sensor.height > 1 ? 2.0 * r / (sensor.height - 1) - 1.0 : 0.0;
    return Vec3(1.0, -u * tan_h, -v * tan_v).normalized();
  };

  constexpr float kMiss = std::numeric_limits<float>::quiet_NaN();
  std::vector<Vec3f> hits(rays, Vec3f::Constant(kMiss));
  parallel_for(rays, [&](std::size_t i) {
    const Vec3 d_sensor = ray_dir(i);
    const Vec3 d_world = q.rotation * d_sensor;
    const double t = cast_ray(scene, q.translation, d_world, sensor.max_range);
    if (!std::isfinite(t)) return;
    double range = t;
    if (sensor.noise_sigma > 0.0) {
      CounterRng rng(seed, frame_index, i);
      const double noise = std::clamp(sensor.noise_sigma * rng.normal(),
                                      -3.0 * sensor.noise_sigma, 3.0 * sensor.noise_sigma);
      range += noise;
    }
    hits[i] = (d_sensor * range).cast<float>();
  });

  SensorFrame frame;
  frame.pose = q;
  frame.timestamp = sensor.rate_hz > 0.0 ? frame_index / sensor.rate_hz
                                         : static_cast<double>(frame_index);
  frame.points.reserve(rays / 2);
  for (const Vec3f& p : hits)
    if (std::isfinite(p.x())) frame.points.push_back(p);
  return frame;
}

Pose look_pose(const Vec3& position, const Vec3& forward) {
  Pose pose;
  const Vec3 f = forward.normalized();
  Vec3 left = Vec3::UnitZ().cross(f);
  if (left.norm() < 1e-6) left = Vec3::UnitX().cross(f);  // looking straight up/down
  left.normalize();
  const Vec3 up = f.cross(left);
  pose.rotation.col(0) = f;
  pose.rotation.col(1) = left;
  pose.rotation.col(2) = up;
  pose.translation = position;
  return pose;
}

std::vector<Pose> scripted_trajectory(const TrajectorySpec& spec) {
  const std::size_t n =
      static_cast<std::size_t>(std::floor(spec.duration_s * spec.rate_hz + 1e-9));
  std::vector<Pose> poses;
  poses.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    switch (spec.kind) {
      case TrajectoryKind::Straight: {
        const Vec3 pos = spec.start + s * (spec.end - spec.start);
        const double pitch =
            (spec.pitch_start_deg + s * (spec.pitch_end_deg - spec.pitch_start_deg)) *
            kDegToRad;
        Vec3 dir = spec.end - spec.start;
        dir.z() = 0.0;
        if (dir.norm() < 1e-9) dir = Vec3::UnitX();
        dir.normalize();
        const Vec3 forward(dir.x() * std::cos(pitch), dir.y() * std::cos(pitch),
                           std::sin(pitch));
        poses.push_back(look_pose(pos, forward));
        break;
      }
      case TrajectoryKind::Orbit: {
        const double a = spec.start_angle_deg * kDegToRad +
                         2.0 * M_PI * spec.revolutions * s;
        const Vec3 pos = spec.center +
                         Vec3(spec.radius * std::cos(a), spec.radius * std::sin(a),
                              spec.height);
        poses.push_back(look_pose(pos, spec.center - pos));
        break;
      }
      case TrajectoryKind::StairAscent: {
        const Vec3 flat = spec.start + s * (spec.end - spec.start);
        const double climb =
            std::max(0.0, (flat.x() - spec.stair_x0) / spec.stair_run) * spec.stair_rise;
        const Vec3 pos = flat + Vec3(0, 0, climb);
        const double pitch =
            (spec.pitch_start_deg + s * (spec.pitch_end_deg - spec.pitch_start_deg)) *
            kDegToRad;
        const Vec3 forward(std::cos(pitch), 0.0, std::sin(pitch));
        poses.push_back(look_pose(pos, forward));
        break;
      }
    }
  }
  return poses;
}

}  // namespace voxplane
