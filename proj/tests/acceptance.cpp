// Acceptance suite: one criterion per function, one pass/fail line each.
// Exit code is the number of failed criteria. `acceptance N` runs only
// criterion N.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "test_support.hpp"
#include "voxplane/frame_io.hpp"
#include "voxplane/jacobi.hpp"
#include "voxplane/pipeline.hpp"
#include "voxplane/polygon_io.hpp"
#include "voxplane/voxel_grid.hpp"

using namespace voxplane;

namespace {

double deg_between(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * kRadToDeg;
}

// intersection area of two convex CCW rings (Sutherland-Hodgman)
double convex_intersection_area(std::vector<Vec2> subject, const std::vector<Vec2>& clip) {
  for (std::size_t e = 0; e < clip.size() && subject.size() >= 3; ++e) {
    const Vec2& a = clip[e];
    const Vec2& b = clip[(e + 1) % clip.size()];
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Vec2& cur = subject[i];
      const Vec2& nxt = subject[(i + 1) % subject.size()];
      const auto side = [&](const Vec2& p) {
        return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
      };
      const double sc = side(cur), sn = side(nxt);
      if (sc >= 0.0) out.push_back(cur);
      if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0))
        out.push_back(cur + (sc / (sc - sn)) * (nxt - cur));
    }
    subject = std::move(out);
  }
  if (subject.size() < 3) return 0.0;
  return std::abs(polygon_area(subject));
}

std::vector<Vec2> xy_ring(const PlanePolygon& poly) {
  std::vector<Vec2> ring;
  ring.reserve(poly.vertices3d.size());
  for (const Vec3& v : poly.vertices3d) ring.emplace_back(v.x(), v.y());
  if (polygon_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
  return ring;
}

// polygons whose xy projection covers at least half of the rect footprint
int planes_over_footprint(const std::vector<PlanePolygon>& polygons,
                          const std::vector<Vec2>& footprint) {
  const double area = std::abs(polygon_area(footprint));
  int count = 0;
  for (const PlanePolygon& p : polygons)
    if (convex_intersection_area(xy_ring(p), footprint) >= 0.5 * area) ++count;
  return count;
}

PipelineConfig acceptance_config(SceneKind kind, const std::string& out_dir,
                                 std::uint64_t seed) {
  PipelineConfig c = default_config();
  c.scene_kind = kind;
  c.grid_extent = Vec3i(200, 200, 200);  // desk-scale 2 m cube at 0.01 m
  c.run.seed = seed;
  c.ransac.seed = seed;
  c.output.dir = out_dir;
  return c;
}

// ---------------------------------------------------------------------------
// 1. Multi-plane IoU on SingleStage + Overhang representational gap
bool criterion_multi_plane_iou(std::string& detail) {
  PipelineConfig voxel =
      acceptance_config(SceneKind::SingleStage, testsup::scratch_dir("acc1_voxel"), 2025);
  voxel.run.frames = 100;
  const PipelineResult voxel_result = run_pipeline(voxel);

  PipelineConfig base =
      acceptance_config(SceneKind::SingleStage, testsup::scratch_dir("acc1_base"), 2025);
  base.run.frames = 100;
  base.run.baseline = true;
  const PipelineResult base_result = run_pipeline(base);

  PipelineConfig over_v =
      acceptance_config(SceneKind::Overhang, testsup::scratch_dir("acc1_over_v"), 99);
  over_v.run.frames = 60;
  const PipelineResult over_voxel = run_pipeline(over_v);

  PipelineConfig over_b =
      acceptance_config(SceneKind::Overhang, testsup::scratch_dir("acc1_over_b"), 99);
  over_b.run.frames = 60;
  over_b.run.baseline = true;
  const PipelineResult over_base = run_pipeline(over_b);

  // overlap region: the overhang slab footprint
  const Scene over_scene = build_scene(SceneKind::Overhang, over_v.scene);
  const std::vector<Vec2> footprint = xy_ring(over_scene.ground_truth[1]);
  const int voxel_over = planes_over_footprint(over_voxel.polygons, footprint);
  const int base_over = planes_over_footprint(over_base.polygons, footprint);

  const double voxel_iou = voxel_result.iou ? voxel_result.iou->mean_iou : 0.0;
  const double base_iou = base_result.iou ? base_result.iou->mean_iou : 0.0;

  std::ostringstream os;
  os << "voxel IoU " << voxel_iou << " (need >= 0.95), baseline " << base_iou
     << " (need strictly lower); overhang planes over footprint: voxel " << voxel_over
     << " (need >= 2), baseline " << base_over << " (need <= 1)";
  detail = os.str();
  return voxel_iou >= 0.95 && base_iou < voxel_iou && voxel_over >= 2 && base_over <= 1;
}

// ---------------------------------------------------------------------------
// 2. Cluster-parallel scaling ordering
bool criterion_cluster_scaling(std::string& detail) {
  AblationConfig config;
  config.cluster_counts = {1, 2, 4, 8, 16};
  config.trials = 100;
  config.seed = 424242;
  const std::vector<AblationRow> rows = run_ablation(config);
  write_ablation_csv(testsup::scratch_dir("acc2") + "/ablation.csv", rows);

  const AblationRow& first = rows.front();
  const AblationRow& last = rows.back();
  const double ratio1 = first.parallel_ms / first.serial_ms;
  const double ratio16 = last.parallel_ms / last.serial_ms;

  std::ostringstream os;
  os << "parallel/serial ratio at 1 cluster " << ratio1 << ", at 16 clusters " << ratio16
     << "; parallel(16) " << last.parallel_ms << " ms vs serial(16) " << last.serial_ms
     << " ms";
  detail = os.str();
  return ratio16 < ratio1 && last.parallel_ms < last.serial_ms;
}

// ---------------------------------------------------------------------------
// 3. CCL equals union-find on random geometric graphs
bool criterion_ccl_oracle(std::string& detail) {
  testsup::CounterRng rng(33);
  int graphs_checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 50 + rng.below(951);  // up to 1000 nodes
    const double radius = rng.uniform(0.03, 0.15);
    std::vector<Vec2> xy(n);
    for (auto& p : xy) p = Vec2(rng.uniform(), rng.uniform());

    Adjacency adj(n);
    oracle::UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if ((xy[i] - xy[j]).norm() < radius) {
          adj[i].push_back(static_cast<std::int32_t>(j));
          adj[j].push_back(static_cast<std::int32_t>(i));
          uf.merge(i, j);
        }
    const std::vector<std::int32_t> expected = uf.canonical_labels();
    const std::vector<SteppablePoint> pts(
        n, SteppablePoint{Vec3i::Zero(), Vec3::Zero(), Vec3::UnitZ()});

    for (int order = 0; order < 3; ++order) {
      Adjacency shuffled = adj;
      for (auto& list : shuffled)
        for (std::size_t i = list.size(); i > 1; --i)
          std::swap(list[i - 1], list[rng.below(static_cast<std::uint32_t>(i))]);
      const ClusterSet set = label_components(pts, shuffled);
      if (set.labels != expected) {
        detail = "partition mismatch on graph " + std::to_string(trial);
        return false;
      }
    }
    ++graphs_checked;
  }
  detail = std::to_string(graphs_checked) + " graphs x 3 edge orders, all exact";
  return graphs_checked == 50;
}

// ---------------------------------------------------------------------------
// 4. RANSAC recovery under 30% outliers
bool criterion_ransac_recovery(std::string& detail) {
  const int trials = 200;
  int recovered = 0;
  for (int trial = 0; trial < trials; ++trial) {
    testsup::CounterRng rng(9000 + trial);
    std::vector<Vec3> pts = testsup::plane_points(Vec3::UnitZ(), 0.2, 700, 1.0, 0.002, rng);
    const std::vector<Vec3> clean = pts;
    for (int i = 0; i < 300; ++i)  // 30% outliers
      pts.emplace_back(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                       rng.uniform(0.25, 1.0));

    Cluster cluster;
    cluster.label = 0;
    for (const Vec3& p : pts) cluster.members.push_back({Vec3i::Zero(), p, Vec3::UnitZ()});

    RansacParams params;  // I = 100, eps = 0.01
    params.seed = 777 + trial;
    const auto fits = fit_planes({cluster}, params);
    if (fits.empty()) continue;

    const oracle::TlsPlane ref = oracle::tls_plane(clean);
    if (deg_between(fits[0].model.normal, ref.normal) <= 1.0 &&
        std::abs(fits[0].model.offset - ref.offset) <= 0.005)
      ++recovered;
  }
  detail = std::to_string(recovered) + "/" + std::to_string(trials) +
           " trials within 1 deg / 0.005 m of the TLS-on-clean oracle (need >= 198)";
  return recovered >= 198;
}

// ---------------------------------------------------------------------------
// 5. Hull exactness and filter soundness
bool criterion_hull_exactness(std::string& detail) {
  testsup::CounterRng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(998));
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1));

    const std::vector<Vec2> expected = oracle::brute_force_hull(pts);
    const std::vector<Vec2> got = convex_hull(pts);
    if (got.size() != expected.size()) {
      detail = "hull size mismatch on set " + std::to_string(trial);
      return false;
    }
    for (std::size_t i = 0; i < got.size(); ++i)
      if ((got[i] - expected[i]).norm() > 1e-12) {
        detail = "hull vertex mismatch on set " + std::to_string(trial);
        return false;
      }

    // soundness: every oracle hull vertex survives the prefilter
    const std::vector<Vec2> survivors = hull_filter(pts);
    for (const Vec2& v : expected) {
      bool found = false;
      for (const Vec2& s : survivors)
        if (s == v) {
          found = true;
          break;
        }
      if (!found) {
        detail = "filter dropped a true hull vertex on set " + std::to_string(trial);
        return false;
      }
    }
  }
  detail = "200 random sets: filtered hull == O(n^2) oracle, filter sound on all";
  return true;
}

// ---------------------------------------------------------------------------
// 6. Dynamic clearing: box appears then disappears
bool criterion_dynamic_clearing(std::string& detail) {
  // floor large enough that rays grazing the old box top still terminate
  Scene with_box;
  {
    Rect floor;
    floor.pose.translation = Vec3(0.6, 0, 0);
    floor.half_u = 1.8;
    floor.half_v = 1.8;
    with_box.rects.push_back(floor);
    with_box.boxes.push_back({Vec3(0.15, -0.15, 0.0), Vec3(0.45, 0.15, 0.3)});
  }
  Scene without_box = with_box;
  without_box.boxes.clear();

  SensorSpec cam = default_config().sensor;  // 320x240 depth camera
  TrajectorySpec traj;
  traj.kind = TrajectoryKind::Straight;
  traj.duration_s = 2.0;
  traj.rate_hz = 20.0;  // 40 poses: 20 with the box, 20 after removal
  traj.start = Vec3(-0.55, 0.0, 0.5);
  traj.end = Vec3(-0.05, 0.0, 0.5);
  traj.pitch_start_deg = -40.0;
  traj.pitch_end_deg = -40.0;
  const std::vector<Pose> poses = scripted_trajectory(traj);

  VoxelGrid grid(0.01, Vec3i(200, 200, 200), poses.front().translation);
  Vec3i last_cell(INT32_MIN, 0, 0);
  for (std::size_t i = 0; i < poses.size(); ++i) {
    const Scene& scene = i < 20 ? with_box : without_box;
    const SensorFrame frame = render_frame(scene, cam, poses[i], 31337, i);
    grid.clear_rays(frame);
    grid.integrate_frame(frame);
    const Vec3 t = frame.pose.translation;
    const Vec3i cell(static_cast<int>(std::floor(t.x() / 0.01)),
                     static_cast<int>(std::floor(t.y() / 0.01)),
                     static_cast<int>(std::floor(t.z() / 0.01)));
    if (cell != last_cell) {
      grid.recenter(t);
      last_cell = cell;
    }
  }

  // no occupied voxel may remain in the box's former volume (the floor band
  // underneath, re-observed after removal, is not part of the box volume)
  std::size_t remaining = 0;
  for (const OccupiedVoxel& v : grid.occupied_voxels()) {
    const Vec3 c = grid.index_to_center(v.index);
    if (c.x() > 0.15 && c.x() < 0.45 && c.y() > -0.15 && c.y() < 0.15 && c.z() > 0.02 &&
        c.z() < 0.31)
      ++remaining;
  }

  // the floor beneath must come back as one steppable plane
  SegmentationParams seg;
  const auto estimates = estimate_normals(grid, seg);
  SteppablePartition part = classify_steppable(grid, estimates, seg);
  const Adjacency adj = build_adjacency(part.steppable, seg, grid.resolution());
  const ClusterSet set = label_components(part.steppable, adj);
  const std::vector<Cluster> clusters = filter_clusters(set, seg.min_cluster_size);
  RansacParams ransac;
  ransac.seed = 4;
  const std::vector<ClusterFit> fits = fit_planes(clusters, ransac);

  int floor_planes = 0;
  double coverage = 0.0;
  const std::vector<Vec2> footprint = {{0.15, -0.15}, {0.45, -0.15}, {0.45, 0.15}, {0.15, 0.15}};
  for (const ClusterFit& fit : fits) {
    const PlaneModel model = refine_plane(fit.inliers, fit.model);
    if (std::abs(model.offset) > 0.02 || model.normal.z() < 0.95) continue;
    const auto poly = make_polygon(model, fit.inliers);
    if (!poly) continue;
    ++floor_planes;
    coverage = std::max(
        coverage, convex_intersection_area(xy_ring(*poly), footprint) / (0.3 * 0.3));
  }

  std::ostringstream os;
  os << remaining << " occupied voxels left in the former box volume (need 0); "
     << floor_planes << " floor plane(s) (need 1) covering " << coverage * 100.0
     << "% of the footprint (need >= 90%)";
  detail = os.str();
  return remaining == 0 && floor_planes == 1 && coverage >= 0.9;
}

// ---------------------------------------------------------------------------
// 7. Jacobi vs closed-form eigensolver
bool criterion_eigensolver(std::string& detail) {
  testsup::CounterRng rng(66);
  for (int trial = 0; trial < 1000; ++trial) {
    const Mat3 m = testsup::random_symmetric(rng);
    const EigenSym3 jac = jacobi_eigen_sym3(m);
    const oracle::EigenResult ref = oracle::eigen_sym3_closed_form(m);
    const double scale = std::max(1e-30, ref.values.cwiseAbs().maxCoeff());
    for (int k = 0; k < 3; ++k) {
      if (std::abs(jac.eigenvalues[k] - ref.values[k]) > 1e-8 * scale) {
        detail = "eigenvalue mismatch on matrix " + std::to_string(trial);
        return false;
      }
      const double angle =
          std::acos(std::min(1.0, std::abs(jac.eigenvectors.col(k).dot(ref.vectors.col(k)))));
      if (angle > 1e-6) {
        detail = "eigenvector mismatch on matrix " + std::to_string(trial);
        return false;
      }
    }
  }
  detail = "1000 matrices within 1e-8 (values) / 1e-6 rad (vectors)";
  return true;
}

// ---------------------------------------------------------------------------
// 8. Byte-identical outputs across thread counts
bool criterion_determinism(std::string& detail) {
  PipelineConfig one =
      acceptance_config(SceneKind::SmallObstacle, testsup::scratch_dir("acc8_t1"), 515);
  one.run.frames = 10;
  one.run.threads = 1;
  const PipelineResult r1 = run_pipeline(one);

  PipelineConfig three =
      acceptance_config(SceneKind::SmallObstacle, testsup::scratch_dir("acc8_t3"), 515);
  three.run.frames = 10;
  three.run.threads = 3;
  const PipelineResult r3 = run_pipeline(three);

  const bool polygons_equal = testsup::files_identical(r1.polygons_path, r3.polygons_path);
  const bool report_equal =
      testsup::files_identical(r1.iou_report_path, r3.iou_report_path);
  detail = std::string("polygon files ") + (polygons_equal ? "identical" : "DIFFER") +
           ", IoU reports " + (report_equal ? "identical" : "DIFFER") +
           " (1 vs 3 threads)";
  return polygons_equal && report_equal;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> run;
  double budget_s;  // 0 = no stated cap
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "multi-plane IoU (SingleStage + Overhang baseline gap)", criterion_multi_plane_iou, 120.0},
      {2, "cluster-parallel scaling ordering", criterion_cluster_scaling, 180.0},
      {3, "CCL matches union-find on 50 random graphs", criterion_ccl_oracle, 60.0},
      {4, "RANSAC recovery with 30% outliers", criterion_ransac_recovery, 60.0},
      {5, "hull exactness and filter soundness", criterion_hull_exactness, 60.0},
      {6, "dynamic clearing of a removed box", criterion_dynamic_clearing, 60.0},
      {7, "Jacobi eigensolver vs closed form", criterion_eigensolver, 1.0},
      {8, "thread-count determinism of output files", criterion_determinism, 0.0},
  };

  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && elapsed > c.budget_s) {
      ok = false;
      detail += " [over runtime budget]";
    }
    std::printf("[%s] criterion %d: %s (%.1fs) -- %s\n", ok ? "PASS" : "FAIL", c.id,
                c.name, elapsed, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures;
}
