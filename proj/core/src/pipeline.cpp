#include "voxplane/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "voxplane/frame_io.hpp"
#include "voxplane/heightmap.hpp"
#include "voxplane/parallel.hpp"
#include "voxplane/polygon_io.hpp"
#include "voxplane/rng.hpp"
#include "voxplane/voxel_grid.hpp"

namespace voxplane {
namespace fs = std::filesystem;

namespace {

std::string ensure_out_dir(const PipelineConfig& config) {
  const fs::path dir(config.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputError("output: cannot create directory " + dir.string());
  // probe writability up front so failures carry a clear message
  const fs::path probe = dir / ".write_probe";
  if (FILE* f = std::fopen(probe.string().c_str(), "w")) {
    std::fclose(f);
    fs::remove(probe, ec);
  } else {
    throw OutputError("output: directory not writable: " + dir.string());
  }
  return dir.string();
}

Vec3i global_cell(const Vec3& p, double resolution) {
  return Vec3i(static_cast<int>(std::floor(p.x() / resolution)),
               static_cast<int>(std::floor(p.y() / resolution)),
               static_cast<int>(std::floor(p.z() / resolution)));
}

std::vector<PlanePolygon> voxel_frame_polygons(VoxelGrid& grid,
                                               const PipelineConfig& config,
                                               FrameTiming& timing,
                                               ClusterSet* clusters_out = nullptr) {
  std::vector<PlanePolygon> polygons;
  if (grid.occupied_count() == 0) return polygons;
  StageTimer timer;

  timer.start();
  const std::vector<SurfaceEstimate> estimates =
      estimate_normals(grid, config.segmentation);
  const SteppablePartition part = classify_steppable(grid, estimates, config.segmentation);
  timing.classify_ms = timer.stop_ms();

  timer.start();
  const Adjacency adjacency =
      build_adjacency(part.steppable, config.segmentation, grid.resolution());
  const ClusterSet set = label_components(part.steppable, adjacency);
  const std::vector<Cluster> clusters =
      filter_clusters(set, config.segmentation.min_cluster_size);
  timing.cluster_ms = timer.stop_ms();
  if (clusters_out) *clusters_out = set;
  timing.clusters = clusters.size();

  timer.start();
  const std::vector<ClusterFit> fits = fit_planes(clusters, config.ransac);
  timing.ransac_ms = timer.stop_ms();

  timer.start();
  for (const ClusterFit& fit : fits) {
    PlaneModel model = fit.model;
    if (config.run.refine) {
      model = refine_plane(fit.inliers, model, config.ransac.up);
      model.inlier_count = fit.model.inlier_count;
      model.cluster_label = fit.model.cluster_label;
    }
    auto poly = make_polygon(model, fit.inliers);
    if (poly && poly->area >= config.output.min_polygon_area)
      polygons.push_back(std::move(*poly));
  }
  timing.hull_ms = timer.stop_ms();
  return polygons;
}

}  // namespace

std::vector<Pose> default_trajectory(const PipelineConfig& config) {
  const int frames = config.run.frames;
  const double rate = config.sensor.rate_hz > 0.0 ? config.sensor.rate_hz : 20.0;
  TrajectorySpec spec;
  spec.rate_hz = rate;

  switch (config.scene_kind) {
    case SceneKind::SingleStage: {
      // orbit to cover the floor (including under the platform), then an
      // overhead pass across the platform
      const int orbit_frames = (frames * 3) / 4;
      const int over_frames = frames - orbit_frames;
      spec.kind = TrajectoryKind::Orbit;
      spec.center = Vec3::Zero();
      spec.radius = 0.5 * config.scene.floor_size + 0.10;
      spec.height = 0.5;
      spec.revolutions = 1.0;
      spec.duration_s = orbit_frames / rate;
      std::vector<Pose> poses = scripted_trajectory(spec);

      const double cx = 0.5 * (config.scene.floor_size - config.scene.stage_size);
      TrajectorySpec over;
      over.kind = TrajectoryKind::Straight;
      over.rate_hz = rate;
      over.duration_s = over_frames / rate;
      over.start = Vec3(spec.radius, 0.0, spec.height);
      over.end = Vec3(cx, 0.0, 0.9);
      over.pitch_start_deg = -45.0;
      over.pitch_end_deg = -75.0;
      for (Pose& p : scripted_trajectory(over)) poses.push_back(p);
      while (static_cast<int>(poses.size()) > frames) poses.pop_back();
      return poses;
    }
    case SceneKind::Overhang: {
      // approach looking down at the floor, finish looking up under the slab
      spec.kind = TrajectoryKind::Straight;
      spec.duration_s = frames / rate;
      spec.start = Vec3(-0.6, 0.0, 0.45);
      spec.end = Vec3(0.1, 0.0, 0.45);
      spec.pitch_start_deg = -35.0;
      spec.pitch_end_deg = 10.0;
      return scripted_trajectory(spec);
    }
    case SceneKind::Stair5: {
      spec.kind = TrajectoryKind::StairAscent;
      spec.duration_s = frames / rate;
      spec.start = Vec3(-0.9, 0.0, 0.55);
      spec.end = Vec3(2.5 * config.scene.stair_run, 0.0, 0.55);
      spec.pitch_start_deg = -30.0;
      spec.pitch_end_deg = -30.0;
      spec.stair_rise = config.scene.stair_rise;
      spec.stair_run = config.scene.stair_run;
      spec.stair_x0 = 0.0;
      return scripted_trajectory(spec);
    }
    case SceneKind::SmallObstacle: {
      spec.kind = TrajectoryKind::Straight;
      spec.duration_s = frames / rate;
      spec.start = Vec3(-0.55, 0.0, 0.5);
      spec.end = Vec3(-0.05, 0.0, 0.5);
      spec.pitch_start_deg = -40.0;
      spec.pitch_end_deg = -45.0;
      return scripted_trajectory(spec);
    }
  }
  return {};
}

PipelineResult run_frames(const PipelineConfig& config,
                          const std::vector<SensorFrame>& frames,
                          const std::vector<PlanePolygon>* ground_truth) {
  set_thread_count(config.run.threads == 0 ? default_thread_count()
                                           : static_cast<unsigned>(config.run.threads));
  const std::string out_dir = ensure_out_dir(config);

  const Vec3 start_center = frames.empty() ? Vec3::Zero() : frames.front().pose.translation;
  VoxelGrid grid(config.grid_resolution, config.grid_extent, start_center);

  // the baseline keeps a fixed window around the scene origin
  HeightMap hm(config.grid_resolution,
               Eigen::Vector2i(config.grid_extent.x(), config.grid_extent.y()),
               Vec2::Zero());

  PipelineResult result;
  std::vector<FrameTiming> timings;
  Vec3i last_cell = global_cell(start_center, config.grid_resolution);

  for (std::size_t fi = 0; fi < frames.size(); ++fi) {
    const SensorFrame& frame = frames[fi];
    FrameTiming timing;
    timing.frame = fi;
    timing.points = frame.points.size();
    StageTimer frame_timer, timer;
    frame_timer.start();

    if (config.run.baseline) {
      timer.start();
      hm_integrate(hm, frame);
      timing.mapping_ms = timer.stop_ms();

      timer.start();
      std::vector<PlanePolygon> polys =
          hm_segment(hm, config.segmentation, config.ransac, config.run.refine);
      std::erase_if(polys, [&](const PlanePolygon& p) {
        return p.area < config.output.min_polygon_area;
      });
      timing.cluster_ms = timer.stop_ms();
      timing.clusters = polys.size();
      result.polygons = std::move(polys);
    } else {
      timer.start();
      grid.clear_rays(frame);
      grid.integrate_frame(frame);
      const Vec3i cell = global_cell(frame.pose.translation, config.grid_resolution);
      if (cell != last_cell) {
        grid.recenter(frame.pose.translation);
        last_cell = cell;
      }
      timing.mapping_ms = timer.stop_ms();
      timing.voxels = grid.occupied_count();

      const bool want_dump = config.output.dump_labels && fi + 1 == frames.size();
      ClusterSet final_clusters;
      result.polygons =
          voxel_frame_polygons(grid, config, timing, want_dump ? &final_clusters : nullptr);
      if (want_dump)
        dump_labeled_points((fs::path(out_dir) / "labels_final.txt").string(),
                            final_clusters);
    }

    timing.total_ms = frame_timer.stop_ms();
    timings.push_back(timing);

    if (config.output.per_frame_polygons) {
      char name[48];
      std::snprintf(name, sizeof name, "polygons_%04zu.txt", fi);
      write_polygons((fs::path(out_dir) / name).string(), result.polygons);
    }
  }

  result.frames_processed = frames.size();
  result.timing = timeline(std::move(timings));

  result.polygons_path = (fs::path(out_dir) / "polygons_final.txt").string();
  write_polygons(result.polygons_path, result.polygons);

  if (ground_truth) {
    result.iou = match_planes(result.polygons, *ground_truth);
    result.iou_report_path = (fs::path(out_dir) / "iou_report.txt").string();
    write_iou_report(result.iou_report_path, *result.iou);
  }
  if (config.output.timing_csv) {
    result.timing_csv_path = (fs::path(out_dir) / "timing.csv").string();
    write_timing_csv(result.timing_csv_path, result.timing);
  }
  return result;
}

namespace {

std::vector<SensorFrame> render_trajectory(const PipelineConfig& config,
                                           const Scene& scene) {
  const SensorSpec sensor = resolve_sensor(config);
  const std::vector<Pose> poses = default_trajectory(config);
  std::vector<SensorFrame> frames;
  frames.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i)
    frames.push_back(render_frame(scene, sensor, poses[i], config.run.seed, i));
  return frames;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  set_thread_count(config.run.threads == 0 ? default_thread_count()
                                           : static_cast<unsigned>(config.run.threads));
  const Scene scene = build_scene(config.scene_kind, config.scene);
  const std::vector<SensorFrame> frames = render_trajectory(config, scene);
  if (config.output.emit_frames) {
    const std::string out_dir = ensure_out_dir(config);
    write_frames_binary((fs::path(out_dir) / "frames.bin").string(), frames);
  }
  return run_frames(config, frames, &scene.ground_truth);
}

SimulateResult simulate_scene(const PipelineConfig& config) {
  set_thread_count(config.run.threads == 0 ? default_thread_count()
                                           : static_cast<unsigned>(config.run.threads));
  const std::string out_dir = ensure_out_dir(config);
  const Scene scene = build_scene(config.scene_kind, config.scene);
  const std::vector<SensorFrame> frames = render_trajectory(config, scene);

  SimulateResult out;
  out.frames_path = (fs::path(out_dir) / "frames.bin").string();
  out.truth_path = (fs::path(out_dir) / "truth.txt").string();
  write_frames_binary(out.frames_path, frames);
  write_polygons(out.truth_path, scene.ground_truth);
  out.frames = frames.size();
  for (const SensorFrame& f : frames) out.points += f.points.size();
  return out;
}

PipelineResult replay_pipeline(const PipelineConfig& config, const std::string& frames_path,
                               const std::string& truth_path) {
  if (!fs::exists(frames_path)) throw MissingInputError("replay: no such file: " + frames_path);
  const std::vector<SensorFrame> frames = read_frames_binary(frames_path);

  std::vector<PlanePolygon> truth;
  if (!truth_path.empty()) {
    if (!fs::exists(truth_path)) throw MissingInputError("replay: no such file: " + truth_path);
    truth = read_polygons(truth_path);
  }
  return run_frames(config, frames, truth_path.empty() ? nullptr : &truth);
}

std::vector<AblationRow> run_ablation(const AblationConfig& config) {
  set_thread_count(config.threads == 0 ? default_thread_count()
                                       : static_cast<unsigned>(config.threads));
  std::vector<AblationRow> rows;
  if (config.trials <= 0) return rows;

  RansacParams params;
  params.iterations = config.iterations;
  params.inlier_eps = config.inlier_eps;
  params.seed = config.seed;

  for (const int count : config.cluster_counts) {
    AblationRow row;
    row.clusters = count;
    row.trials = config.trials;
    rows.push_back(row);
  }
  std::vector<std::vector<double>> par_samples(rows.size()), ser_samples(rows.size());

  // trial-major order with alternating mode order inside each measurement,
  // so slow drift (thermal, co-scheduling) hits every cluster count and
  // both execution modes alike
  StageTimer timer;
  for (int trial = 0; trial < config.trials; ++trial) {
    for (std::size_t ci = 0; ci < config.cluster_counts.size(); ++ci) {
      const int count = config.cluster_counts[ci];
      // exactly M points per cluster, M drawn once per trial
      CounterRng trial_rng(config.seed, static_cast<std::uint64_t>(count), trial);
      const int m = config.points_min +
                    static_cast<int>(trial_rng.below(config.points_max - config.points_min + 1));
      std::vector<Cluster> clusters(count);
      for (int c = 0; c < count; ++c) {
        Cluster& cluster = clusters[c];
        cluster.label = c;
        cluster.members.resize(m);
        CounterRng rng(config.seed ^ 0x5eedULL, static_cast<std::uint64_t>(trial) << 8 | c, 7);
        const double z0 = rng.uniform(0.0, 0.5);
        for (int i = 0; i < m; ++i) {
          const double x = rng.uniform(-0.5, 0.5);
          const double y = rng.uniform(-0.5, 0.5);
          const double z = z0 + 0.004 * rng.normal();
          cluster.members[i] = {Vec3i(0, 0, 0), Vec3(x, y, z), Vec3::UnitZ()};
        }
      }

      const auto time_mode = [&](RansacExecution mode) {
        params.execution = mode;
        timer.start();
        const auto fits = fit_planes(clusters, params);
        const double ms = timer.stop_ms();
        if (fits.size() != clusters.size())
          throw std::logic_error("ablation: cluster dropped during timing");
        return ms;
      };
      if (trial % 2 == 0) {
        par_samples[ci].push_back(time_mode(RansacExecution::ClusterParallel));
        ser_samples[ci].push_back(time_mode(RansacExecution::PerClusterSerial));
      } else {
        ser_samples[ci].push_back(time_mode(RansacExecution::PerClusterSerial));
        par_samples[ci].push_back(time_mode(RansacExecution::ClusterParallel));
      }
    }
  }
  const auto trimmed_mean = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t trim = v.size() / 10;
    double sum = 0.0;
    for (std::size_t i = trim; i < v.size() - trim; ++i) sum += v[i];
    return sum / static_cast<double>(v.size() - 2 * trim);
  };
  for (std::size_t ci = 0; ci < rows.size(); ++ci) {
    rows[ci].parallel_ms = trimmed_mean(par_samples[ci]);
    rows[ci].serial_ms = trimmed_mean(ser_samples[ci]);
    rows[ci].parallel_median_ms = par_samples[ci][par_samples[ci].size() / 2];
    rows[ci].serial_median_ms = ser_samples[ci][ser_samples[ci].size() / 2];
  }
  return rows;
}

void write_ablation_csv(const std::string& path, const std::vector<AblationRow>& rows) {
  std::ofstream os(path);
  if (!os) throw OutputError("ablation csv: cannot open for write: " + path);
  os << "clusters,trials,parallel_ms,serial_ms,ratio,parallel_median_ms,serial_median_ms\n";
  char buf[160];
  for (const AblationRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.4f,%.4f,%.4f,%.4f,%.4f\n", r.clusters,
                  r.trials, r.parallel_ms, r.serial_ms,
                  r.serial_ms > 0.0 ? r.parallel_ms / r.serial_ms : 0.0,
                  r.parallel_median_ms, r.serial_median_ms);
    os << buf;
  }
}

}  // namespace voxplane
