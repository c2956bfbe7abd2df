#pragma once

#include <cstdint>
#include <vector>

#include "voxplane/types.hpp"

namespace voxplane {

/// Robot-centric dense 3D voxel map.
///
/// Each cell keeps a running (sum, count) pair so the stored mean
/// (materialized as sum/count at read time) is invariant to the order in
/// which points are merged, up to floating point associativity. The window
/// translates by whole voxels as the robot moves; surviving cells keep
/// their world position exactly.
class VoxelGrid {
 public:
  struct Cell {
    double sx = 0.0, sy = 0.0, sz = 0.0;
    std::uint32_t count = 0;
    VoxelStatus status = VoxelStatus::Free;
  };

  /// Grid of `extent` voxels per axis, `resolution` meters per edge,
  /// world-space window centered on `center`.
  VoxelGrid(double resolution, const Vec3i& extent, const Vec3& center);

  double resolution() const { return resolution_; }
  const Vec3i& extent() const { return extent_; }
  /// World position of the grid's min corner.
  const Vec3& origin() const { return origin_; }
  Vec3 world_center() const;

  bool in_bounds(const Vec3i& idx) const {
    return (idx.array() >= 0).all() && (idx.array() < extent_.array()).all();
  }
  /// floor((p - origin) / resolution), may be out of bounds.
  Vec3i world_to_index(const Vec3& p) const;
  /// Center of cell idx: origin + (idx + 0.5) * resolution.
  Vec3 index_to_center(const Vec3i& idx) const;

  std::size_t flat(const Vec3i& idx) const {
    return (static_cast<std::size_t>(idx.x()) * extent_.y() + idx.y()) * extent_.z() +
           idx.z();
  }
  Vec3i unflat(std::size_t f) const;

  const Cell& cell(const Vec3i& idx) const { return cells_[flat(idx)]; }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t occupied_count() const { return occupied_; }

  /// Merge one point into its cell (single-point form of the frame update).
  void merge_point(const Vec3i& idx, const Vec3& p);

  /// Transform the frame's points to world space and fold each in-bounds
  /// point into its voxel: an empty voxel becomes {p, 1, Occupied}, an
  /// occupied one updates mean <- (c*mean + p)/(c+1), count <- c+1. Points
  /// out of bounds or non-finite are discarded (counted). Throws
  /// std::invalid_argument if the pose rotation is not orthonormal.
  UpdateStats integrate_frame(const SensorFrame& frame);

  /// Reset every voxel strictly between the sensor-origin voxel and each
  /// point's endpoint voxel (both excluded) to {unset, 0, Free}. The
  /// traversed set is deduplicated before mutation, so a voxel is reset at
  /// most once per call. Rays are clipped to the grid window.
  ClearStats clear_rays(const SensorFrame& frame);

  /// Translate the window by whole voxels so new_center lies within half a
  /// voxel of the window's world center. Cells falling off the window are
  /// dropped and counted; surviving cells keep their world position.
  ShiftStats recenter(const Vec3& new_center);

  /// All cells with count > 0, in lexicographic (ix, iy, iz) order.
  std::vector<OccupiedVoxel> occupied_voxels() const;

  /// Status writeback used by the steppability classifier.
  void set_status(const Vec3i& idx, VoxelStatus s) { cells_[flat(idx)].status = s; }

  static Vec3 cell_mean(const Cell& c) {
    return Vec3(c.sx, c.sy, c.sz) / static_cast<double>(c.count);
  }

 private:
  double resolution_;
  Vec3i extent_;
  Vec3 origin_;
  std::vector<Cell> cells_;
  std::size_t occupied_ = 0;
  std::vector<std::uint8_t> clear_mask_;  // scratch for clear_rays
};

}  // namespace voxplane
