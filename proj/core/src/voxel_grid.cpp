#include "voxplane/voxel_grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "voxplane/parallel.hpp"

namespace voxplane {

bool is_valid_rotation(const Mat3& r, double tol) {
  const Mat3 should_be_identity = r.transpose() * r;
  if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(r.determinant() - 1.0) <= tol;
}

VoxelGrid::VoxelGrid(double resolution, const Vec3i& extent, const Vec3& center)
    : resolution_(resolution), extent_(extent) {
  if (resolution <= 0.0 || (extent.array() <= 0).any())
    throw std::invalid_argument("VoxelGrid: resolution and extents must be positive");
  origin_ = center - extent.cast<double>() * (0.5 * resolution);
  cells_.resize(static_cast<std::size_t>(extent.x()) * extent.y() * extent.z());
}

Vec3 VoxelGrid::world_center() const {
  return origin_ + extent_.cast<double>() * (0.5 * resolution_);
}

Vec3i VoxelGrid::world_to_index(const Vec3& p) const {
  return Vec3i(static_cast<int>(std::floor((p.x() - origin_.x()) / resolution_)),
               static_cast<int>(std::floor((p.y() - origin_.y()) / resolution_)),
               static_cast<int>(std::floor((p.z() - origin_.z()) / resolution_)));
}

Vec3 VoxelGrid::index_to_center(const Vec3i& idx) const {
  return origin_ + (idx.cast<double>() + Vec3::Constant(0.5)) * resolution_;
}

Vec3i VoxelGrid::unflat(std::size_t f) const {
  const std::size_t zext = static_cast<std::size_t>(extent_.z());
  const std::size_t yext = static_cast<std::size_t>(extent_.y());
  return Vec3i(static_cast<int>(f / (zext * yext)),
               static_cast<int>((f / zext) % yext),
               static_cast<int>(f % zext));
}

void VoxelGrid::merge_point(const Vec3i& idx, const Vec3& p) {
  Cell& c = cells_[flat(idx)];
  if (c.count == 0) ++occupied_;
  c.sx += p.x();
  c.sy += p.y();
  c.sz += p.z();
  ++c.count;
  c.status = VoxelStatus::Occupied;
}

UpdateStats VoxelGrid::integrate_frame(const SensorFrame& frame) {
  if (!is_valid_rotation(frame.pose.rotation))
    throw std::invalid_argument("integrate_frame: pose rotation is not orthonormal");

  const std::size_t n = frame.points.size();
  UpdateStats stats;
  if (n == 0) return stats;

  // Per-point transform and voxel key, parallel over points.
  constexpr std::int64_t kDiscard = -1;
  std::vector<Vec3> world(n);
  std::vector<std::pair<std::int64_t, std::uint32_t>> keys(n);
  parallel_for(n, [&](std::size_t i) {
    const Vec3 p = frame.pose.apply(frame.points[i].cast<double>());
    world[i] = p;
    std::int64_t key = kDiscard;
    if (p.allFinite()) {
      const Vec3i idx = world_to_index(p);
      if (in_bounds(idx)) key = static_cast<std::int64_t>(flat(idx));
    }
    keys[i] = {key, static_cast<std::uint32_t>(i)};
  });

  // Group points by voxel. The (key, point index) order is unique, so the
  // fold order inside each voxel is ascending point index for any thread
  // count.
  std::sort(keys.begin(), keys.end());
  std::size_t first_valid = 0;
  while (first_valid < n && keys[first_valid].first == kDiscard) ++first_valid;
  stats.points_discarded = first_valid;

  std::vector<std::pair<std::size_t, std::size_t>> groups;  // [begin,end) in keys
  for (std::size_t i = first_valid; i < n;) {
    std::size_t j = i + 1;
    while (j < n && keys[j].first == keys[i].first) ++j;
    groups.emplace_back(i, j);
    i = j;
  }
  stats.voxels_touched = groups.size();

  std::atomic<std::size_t> newly_occupied{0};
  parallel_for(groups.size(), [&](std::size_t g) {
    const auto [b, e] = groups[g];
    Cell& c = cells_[static_cast<std::size_t>(keys[b].first)];
    if (c.count == 0) newly_occupied.fetch_add(1, std::memory_order_relaxed);
    for (std::size_t k = b; k < e; ++k) {
      const Vec3& p = world[keys[k].second];
      c.sx += p.x();
      c.sy += p.y();
      c.sz += p.z();
      ++c.count;
    }
    c.status = VoxelStatus::Occupied;
  });
  occupied_ += newly_occupied.load();
  return stats;
}

namespace {

// Cells intersected by the segment [a, b] clipped to the grid window,
// excluding the cells containing a and b themselves. Amanatides-Woo
// stepping; visit() receives each interior cell once per ray.
template <typename Visit>
void walk_segment(const VoxelGrid& grid, const Vec3& a, const Vec3& b, Visit&& visit) {
  const double res = grid.resolution();
  const Vec3 d = b - a;
  const Vec3& lo = grid.origin();
  const Vec3 hi = lo + grid.extent().cast<double>() * res;

  // clip [t0, t1] within [0, 1] to the window
  double t0 = 0.0, t1 = 1.0;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (a[k] < lo[k] || a[k] >= hi[k]) return;
      continue;
    }
    double ta = (lo[k] - a[k]) / d[k];
    double tb = (hi[k] - a[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return;
  }

  const Vec3i origin_cell = grid.world_to_index(a);
  const Vec3i end_cell = grid.world_to_index(b);

  const Vec3 entry = a + t0 * d;
  Vec3i cell = grid.world_to_index(entry);
  for (int k = 0; k < 3; ++k)  // entry exactly on the max face lands one past
    cell[k] = std::clamp(cell[k], 0, grid.extent()[k] - 1);

  Vec3i step = Vec3i::Zero();
  Vec3 t_max = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 t_delta = t_max;
  for (int k = 0; k < 3; ++k) {
    if (d[k] > 0.0) {
      step[k] = 1;
      t_max[k] = t0 + (lo[k] + (cell[k] + 1) * res - entry[k]) / d[k];
      t_delta[k] = res / d[k];
    } else if (d[k] < 0.0) {
      step[k] = -1;
      t_max[k] = t0 + (lo[k] + cell[k] * res - entry[k]) / d[k];
      t_delta[k] = res / -d[k];
    }
  }

  const int max_steps = grid.extent().sum() + 4;
  for (int i = 0; i < max_steps; ++i) {
    if (cell != origin_cell && cell != end_cell) visit(cell);
    int m = 0;
    if (t_max[1] < t_max[m]) m = 1;
    if (t_max[2] < t_max[m]) m = 2;
    if (t_max[m] >= t1) break;  // segment ends inside the current cell
    cell[m] += step[m];
    if (cell[m] < 0 || cell[m] >= grid.extent()[m]) break;
    t_max[m] += t_delta[m];
  }
}

}  // namespace

ClearStats VoxelGrid::clear_rays(const SensorFrame& frame) {
  if (!is_valid_rotation(frame.pose.rotation))
    throw std::invalid_argument("clear_rays: pose rotation is not orthonormal");

  ClearStats stats;
  if (frame.points.empty()) return stats;
  clear_mask_.assign(cells_.size(), 0);

  const Vec3 sensor = frame.pose.translation;
  parallel_for(frame.points.size(), [&](std::size_t i) {
    const Vec3 p = frame.pose.apply(frame.points[i].cast<double>());
    if (!p.allFinite()) return;
    walk_segment(*this, sensor, p, [&](const Vec3i& cell) {
      std::atomic_ref<std::uint8_t>(clear_mask_[flat(cell)]).store(1, std::memory_order_relaxed);
    });
  });

  std::atomic<std::size_t> cleared{0}, freed{0};
  parallel_for_chunks(cells_.size(), 1 << 16, [&](std::size_t b, std::size_t e) {
    std::size_t local_cleared = 0, local_freed = 0;
    for (std::size_t f = b; f < e; ++f) {
      if (!clear_mask_[f]) continue;
      ++local_cleared;
      if (cells_[f].count > 0) ++local_freed;
      cells_[f] = Cell{};
    }
    cleared.fetch_add(local_cleared, std::memory_order_relaxed);
    freed.fetch_add(local_freed, std::memory_order_relaxed);
  });
  stats.voxels_cleared = cleared.load();
  stats.voxels_freed = freed.load();
  occupied_ -= stats.voxels_freed;
  return stats;
}

ShiftStats VoxelGrid::recenter(const Vec3& new_center) {
  ShiftStats stats;
  const Vec3 delta = (new_center - world_center()) / resolution_;
  for (int k = 0; k < 3; ++k) stats.shift[k] = static_cast<int>(std::llround(delta[k]));
  if (stats.shift == Vec3i::Zero()) return stats;

  origin_ += stats.shift.cast<double>() * resolution_;

  // In-place translation: destination j reads source j + shift. Iterating
  // each axis toward the shift direction guarantees a source is read
  // before it is overwritten, as in memmove.
  const Vec3i& ext = extent_;
  const Vec3i& s = stats.shift;
  const auto axis_range = [&](int k) {
    return s[k] >= 0 ? std::pair<int, int>(0, 1) : std::pair<int, int>(ext[k] - 1, -1);
  };
  const auto [x0, xs] = axis_range(0);
  const auto [y0, ys] = axis_range(1);
  const auto [z0, zs] = axis_range(2);

  std::size_t occupied_after = 0;
  for (int xi = 0, x = x0; xi < ext.x(); ++xi, x += xs) {
    for (int yi = 0, y = y0; yi < ext.y(); ++yi, y += ys) {
      for (int zi = 0, z = z0; zi < ext.z(); ++zi, z += zs) {
        const Vec3i dst(x, y, z);
        const Vec3i src = dst + s;
        Cell& out = cells_[flat(dst)];
        out = in_bounds(src) ? cells_[flat(src)] : Cell{};
        if (out.count > 0) ++occupied_after;
      }
    }
  }
  stats.voxels_dropped = occupied_ - occupied_after;
  occupied_ = occupied_after;
  return stats;
}

std::vector<OccupiedVoxel> VoxelGrid::occupied_voxels() const {
  std::vector<OccupiedVoxel> out;
  out.reserve(occupied_);
  for (std::size_t f = 0; f < cells_.size(); ++f) {
    const Cell& c = cells_[f];
    if (c.count == 0) continue;
    out.push_back({unflat(f), cell_mean(c), c.count, c.status});
  }
  return out;
}

}  // namespace voxplane
