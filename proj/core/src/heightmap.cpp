#include "voxplane/heightmap.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace voxplane {

HeightMap::HeightMap(double resolution, const Eigen::Vector2i& extent, const Vec2& center)
    : resolution_(resolution), extent_(extent) {
  if (resolution <= 0.0 || extent.x() <= 0 || extent.y() <= 0)
    throw std::invalid_argument("HeightMap: resolution and extents must be positive");
  origin_ = center - extent.cast<double>() * (0.5 * resolution);
  cells_.resize(static_cast<std::size_t>(extent.x()) * extent.y());
}

Eigen::Vector2i HeightMap::world_to_index(const Vec2& p) const {
  return Eigen::Vector2i(static_cast<int>(std::floor((p.x() - origin_.x()) / resolution_)),
                         static_cast<int>(std::floor((p.y() - origin_.y()) / resolution_)));
}

Vec2 HeightMap::index_to_center(const Eigen::Vector2i& idx) const {
  return origin_ + (idx.cast<double>() + Vec2::Constant(0.5)) * resolution_;
}

void hm_integrate(HeightMap& hm, const SensorFrame& frame) {
  if (!is_valid_rotation(frame.pose.rotation))
    throw std::invalid_argument("hm_integrate: pose rotation is not orthonormal");
  for (const Vec3f& pf : frame.points) {
    const Vec3 p = frame.pose.apply(pf.cast<double>());
    if (!p.allFinite()) continue;
    const Eigen::Vector2i idx = hm.world_to_index(p.head<2>());
    if (!hm.in_bounds(idx)) continue;
    HeightMap::Cell& c = hm.cell(idx);
    c.height = p.z();
    c.valid = true;
  }
}

std::vector<PlanePolygon> hm_segment(const HeightMap& hm, const SegmentationParams& seg,
                                     const RansacParams& ransac, bool refine) {
  const Eigen::Vector2i& ext = hm.extent();
  std::vector<std::int32_t> region(static_cast<std::size_t>(ext.x()) * ext.y(), -1);

  // BFS region growing in lexicographic seed order; region id is the seed's
  // flat index, so labeling is canonical.
  std::vector<Cluster> clusters;
  for (int x = 0; x < ext.x(); ++x) {
    for (int y = 0; y < ext.y(); ++y) {
      const Eigen::Vector2i seed(x, y);
      if (!hm.cell(seed).valid || region[hm.flat(seed)] >= 0) continue;
      Cluster cluster;
      cluster.label = static_cast<std::int32_t>(hm.flat(seed));
      std::deque<Eigen::Vector2i> queue{seed};
      region[hm.flat(seed)] = cluster.label;
      while (!queue.empty()) {
        const Eigen::Vector2i cur = queue.front();
        queue.pop_front();
        const double h = hm.cell(cur).height;
        const Vec2 c2 = hm.index_to_center(cur);
        cluster.members.push_back(
            {Vec3i(cur.x(), cur.y(), 0), Vec3(c2.x(), c2.y(), h), Vec3::UnitZ()});
        const Eigen::Vector2i steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& s : steps) {
          const Eigen::Vector2i nb = cur + s;
          if (!hm.in_bounds(nb)) continue;
          const HeightMap::Cell& cell = hm.cell(nb);
          if (!cell.valid || region[hm.flat(nb)] >= 0) continue;
          if (std::abs(cell.height - h) >= seg.distance_th) continue;
          region[hm.flat(nb)] = cluster.label;
          queue.push_back(nb);
        }
      }
      if (static_cast<int>(cluster.members.size()) >= seg.min_cluster_size)
        clusters.push_back(std::move(cluster));
    }
  }

  std::vector<PlanePolygon> polygons;
  const std::vector<ClusterFit> fits = fit_planes(clusters, ransac);
  for (const ClusterFit& fit : fits) {
    PlaneModel model = fit.model;
    if (refine) model = refine_plane(fit.inliers, model, ransac.up);
    model.inlier_count = fit.model.inlier_count;
    model.cluster_label = fit.model.cluster_label;
    if (auto poly = make_polygon(model, fit.inliers)) polygons.push_back(std::move(*poly));
  }
  return polygons;
}

}  // namespace voxplane
