#pragma once

#include <vector>

#include "voxplane/plane_fit.hpp"
#include "voxplane/polygonize.hpp"
#include "voxplane/segmentation.hpp"
#include "voxplane/types.hpp"

namespace voxplane {

/// 2.5-D baseline: one height per (x, y) cell, latest measurement wins.
/// Deliberately unable to hold two surfaces over the same cell; overhangs
/// and multi-layer structures collapse to whichever return arrived last.
class HeightMap {
 public:
  struct Cell {
    double height = 0.0;
    bool valid = false;
  };

  HeightMap(double resolution, const Eigen::Vector2i& extent, const Vec2& center);

  double resolution() const { return resolution_; }
  const Eigen::Vector2i& extent() const { return extent_; }
  const Vec2& origin() const { return origin_; }

  bool in_bounds(const Eigen::Vector2i& idx) const {
    return idx.x() >= 0 && idx.y() >= 0 && idx.x() < extent_.x() && idx.y() < extent_.y();
  }
  Eigen::Vector2i world_to_index(const Vec2& p) const;
  Vec2 index_to_center(const Eigen::Vector2i& idx) const;

  std::size_t flat(const Eigen::Vector2i& idx) const {
    return static_cast<std::size_t>(idx.x()) * extent_.y() + idx.y();
  }
  const Cell& cell(const Eigen::Vector2i& idx) const { return cells_[flat(idx)]; }
  Cell& cell(const Eigen::Vector2i& idx) { return cells_[flat(idx)]; }

 private:
  double resolution_;
  Eigen::Vector2i extent_;
  Vec2 origin_;
  std::vector<Cell> cells_;
};

/// Write each world-frame point's z into its cell, replacing the prior
/// value (latest wins, in point order). Out-of-bounds points are dropped.
void hm_integrate(HeightMap& hm, const SensorFrame& frame);

/// Region-grow valid cells over 4-neighbors with |dh| < d_th, then fit and
/// polygonize each region of at least min_cluster_size cells through the
/// same RANSAC + hull path as the voxel pipeline.
std::vector<PlanePolygon> hm_segment(const HeightMap& hm, const SegmentationParams& seg,
                                     const RansacParams& ransac, bool refine = true);

}  // namespace voxplane
