#include "voxplane/segmentation.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <unordered_map>

#include "voxplane/jacobi.hpp"
#include "voxplane/parallel.hpp"

namespace voxplane {
namespace {

}  // namespace

std::vector<SurfaceEstimate> estimate_normals(const VoxelGrid& grid,
                                              const SegmentationParams& params) {
  const std::vector<OccupiedVoxel> occupied = grid.occupied_voxels();
  if (occupied.empty()) throw std::invalid_argument("estimate_normals: empty grid");

  const int r = params.neighbor_radius;
  std::vector<SurfaceEstimate> estimates(occupied.size());
  parallel_for(occupied.size(), [&](std::size_t i) {
    const OccupiedVoxel& v = occupied[i];
    SurfaceEstimate& est = estimates[i];
    est.voxel = v.index;
    est.mean = v.mean;

    Vec3 sum = Vec3::Zero();
    Mat3 sq = Mat3::Zero();
    int n = 0;
    Vec3i idx;
    for (int dx = -r; dx <= r; ++dx) {
      idx.x() = v.index.x() + dx;
      for (int dy = -r; dy <= r; ++dy) {
        idx.y() = v.index.y() + dy;
        for (int dz = -r; dz <= r; ++dz) {
          idx.z() = v.index.z() + dz;
          if (!grid.in_bounds(idx)) continue;
          const VoxelGrid::Cell& c = grid.cell(idx);
          if (c.count == 0) continue;
          const Vec3 m = VoxelGrid::cell_mean(c);
          sum += m;
          sq += m * m.transpose();
          ++n;
        }
      }
    }
    est.neighbor_count = n;
    if (n < 3) return;

    const Vec3 mean = sum / n;
    const Mat3 cov = sq / n - mean * mean.transpose();
    const EigenSym3 eig = jacobi_eigen_sym3(cov);
    // rank < 2 (collinear or coincident neighbors) cannot define a plane
    if (eig.eigenvalues[1] <= 1e-12 + 1e-9 * std::abs(eig.eigenvalues[2])) return;

    est.normal = orient_up(eig.eigenvectors.col(0).normalized(), params.up);
    const double d = std::clamp(est.normal.dot(params.up), 0.0, 1.0);
    est.angle_to_up_deg = std::acos(d) * kRadToDeg;
    est.valid = true;
  });
  return estimates;
}

SteppablePartition classify_steppable(VoxelGrid& grid,
                                      const std::vector<SurfaceEstimate>& estimates,
                                      const SegmentationParams& params) {
  SteppablePartition part;
  for (const SurfaceEstimate& est : estimates) {
    const bool steppable = est.valid && est.neighbor_count >= params.min_neighbors &&
                           est.angle_to_up_deg <= params.max_angle_deg;
    if (steppable) {
      part.steppable.push_back({est.voxel, est.mean, est.normal});
      grid.set_status(est.voxel, VoxelStatus::Steppable);
    } else {
      part.objects.push_back(est.voxel);
      grid.set_status(est.voxel, VoxelStatus::Occupied);
    }
  }
  return part;
}

Adjacency build_adjacency(const std::vector<SteppablePoint>& steppable,
                          const SegmentationParams& params, double resolution) {
  const int w = std::max(1, static_cast<int>(std::ceil(params.distance_th / resolution)));
  const double d2_th = params.distance_th * params.distance_th;
  const double cos_th = std::cos(params.adjacency_angle_deg * kDegToRad);

  Adjacency adj(steppable.size());
  if (steppable.empty()) return adj;

  // dense ordinal lookup over the steppable bounding box
  Vec3i lo = steppable.front().voxel, hi = lo;
  for (const SteppablePoint& p : steppable) {
    lo = lo.cwiseMin(p.voxel);
    hi = hi.cwiseMax(p.voxel);
  }
  const Vec3i dims = hi - lo + Vec3i::Ones();
  const std::size_t volume = static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
  const auto slot = [&](const Vec3i& v) {
    const Vec3i d = v - lo;
    return (static_cast<std::size_t>(d.x()) * dims.y() + d.y()) * dims.z() + d.z();
  };
  std::vector<std::int32_t> ordinal(volume, -1);
  for (std::size_t i = 0; i < steppable.size(); ++i)
    ordinal[slot(steppable[i].voxel)] = static_cast<std::int32_t>(i);

  parallel_for(steppable.size(), [&](std::size_t i) {
    const SteppablePoint& a = steppable[i];
    const Vec3i win_lo = (a.voxel - Vec3i::Constant(w)).cwiseMax(lo);
    const Vec3i win_hi = (a.voxel + Vec3i::Constant(w)).cwiseMin(hi);
    Vec3i idx;
    for (idx.x() = win_lo.x(); idx.x() <= win_hi.x(); ++idx.x()) {
      for (idx.y() = win_lo.y(); idx.y() <= win_hi.y(); ++idx.y()) {
        const std::int32_t* row = &ordinal[slot(Vec3i(idx.x(), idx.y(), win_lo.z()))];
        for (int z = win_lo.z(); z <= win_hi.z(); ++z, ++row) {
          const std::int32_t j = *row;
          if (j < 0 || j == static_cast<std::int32_t>(i)) continue;
          const SteppablePoint& b = steppable[j];
          if ((a.mean - b.mean).squaredNorm() >= d2_th) continue;
          if (a.normal.dot(b.normal) <= cos_th) continue;
          adj[i].push_back(j);
        }
      }
    }
  });
  return adj;
}

namespace {

// Lower `label` to at most `v`; true if a change happened.
bool atomic_min(std::atomic<std::int32_t>& label, std::int32_t v) {
  std::int32_t cur = label.load(std::memory_order_relaxed);
  while (v < cur) {
    if (label.compare_exchange_weak(cur, v, std::memory_order_relaxed)) return true;
  }
  return false;
}

}  // namespace

ClusterSet label_components(const std::vector<SteppablePoint>& steppable,
                            const Adjacency& adjacency) {
  const std::size_t n = steppable.size();
  std::unique_ptr<std::atomic<std::int32_t>[]> labels(new std::atomic<std::int32_t>[n]);
  for (std::size_t i = 0; i < n; ++i)
    labels[i].store(static_cast<std::int32_t>(i), std::memory_order_relaxed);

  // Parallel label propagation with hierarchical convergence flags: a
  // per-vertex local flag, a per-chunk block flag, one global flag.
  std::atomic<bool> global_changed{true};
  while (global_changed.load(std::memory_order_acquire)) {
    global_changed.store(false, std::memory_order_release);
    parallel_for_chunks(n, 512, [&](std::size_t b, std::size_t e) {
      bool block_changed = false;
      for (std::size_t i = b; i < e; ++i) {
        bool local_changed = false;
        for (const std::int32_t j : adjacency[i]) {
          const std::int32_t li = labels[i].load(std::memory_order_relaxed);
          const std::int32_t lj = labels[j].load(std::memory_order_relaxed);
          if (li > lj)
            local_changed |= atomic_min(labels[i], lj);
          else if (lj > li)
            local_changed |= atomic_min(labels[j], li);
        }
        block_changed |= local_changed;
      }
      if (block_changed) global_changed.store(true, std::memory_order_release);
    });
  }

  ClusterSet set;
  set.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    set.labels[i] = labels[i].load(std::memory_order_relaxed);

  std::unordered_map<std::int32_t, std::size_t> slot;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int32_t l = set.labels[i];
    auto [it, fresh] = slot.emplace(l, set.clusters.size());
    if (fresh) {
      set.clusters.emplace_back();
      set.clusters.back().label = l;
    }
    set.clusters[it->second].members.push_back(steppable[i]);
  }
  // member ordinals ascend, so the first-seen order is already label order
  return set;
}

std::vector<Cluster> filter_clusters(const ClusterSet& set, int min_size) {
  std::vector<Cluster> out;
  for (const Cluster& c : set.clusters)
    if (static_cast<int>(c.members.size()) >= min_size) out.push_back(c);
  return out;
}

void dump_labeled_points(const std::string& path, const ClusterSet& set) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("dump_labeled_points: cannot open " + path);
  char buf[160];
  for (const Cluster& c : set.clusters) {
    for (const SteppablePoint& p : c.members) {
      std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %d %.9g %.9g %.9g\n", p.mean.x(),
                    p.mean.y(), p.mean.z(), c.label, p.normal.x(), p.normal.y(),
                    p.normal.z());
      os << buf;
    }
  }
}

}  // namespace voxplane
