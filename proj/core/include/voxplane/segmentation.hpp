#pragma once

#include <string>
#include <vector>

#include "voxplane/types.hpp"
#include "voxplane/voxel_grid.hpp"

namespace voxplane {

struct SegmentationParams {
  int neighbor_radius = 1;            // voxels; 1 => 3x3x3 window
  int min_neighbors = 3;              // N_th
  double max_angle_deg = 15.0;        // theta_th, normal vs up
  double adjacency_angle_deg = 15.0;  // theta_th, normal vs normal
  double distance_th = 0.05;          // d_th meters
  int min_cluster_size = 30;
  Vec3 up = Vec3::UnitZ();
};

/// Local surface fit at one occupied voxel. The normal is the smallest-
/// eigenvalue eigenvector of the covariance of the neighbor-window voxel
/// means, flipped so dot(normal, up) >= 0.
struct SurfaceEstimate {
  Vec3i voxel;
  Vec3 mean = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  int neighbor_count = 0;       // N, window voxel means including self
  double angle_to_up_deg = 0.0; // theta_i in [0, 90] when valid
  bool valid = false;           // false: too few neighbors or rank-deficient
};

struct SteppablePoint {
  Vec3i voxel;
  Vec3 mean;
  Vec3 normal;
};

struct SteppablePartition {
  std::vector<SteppablePoint> steppable;  // V_step, lexicographic voxel order
  std::vector<Vec3i> objects;             // V_obj
};

using Adjacency = std::vector<std::vector<std::int32_t>>;

struct Cluster {
  std::int32_t label = 0;  // min initial ordinal among members
  std::vector<SteppablePoint> members;
};

struct ClusterSet {
  std::vector<std::int32_t> labels;  // per steppable ordinal, canonical-min
  std::vector<Cluster> clusters;     // ascending label order
};

/// One estimate per occupied voxel, in lexicographic voxel order.
std::vector<SurfaceEstimate> estimate_normals(const VoxelGrid& grid,
                                              const SegmentationParams& params);

/// Steppable iff valid and N >= N_th and theta <= theta_th (both inclusive).
/// Writes Steppable / Occupied statuses back to the grid.
SteppablePartition classify_steppable(VoxelGrid& grid,
                                      const std::vector<SurfaceEstimate>& estimates,
                                      const SegmentationParams& params);

/// v_j in N(v_i) iff within the candidate window of ceil(d_th/resolution)
/// voxels per axis, ||mu_i - mu_j|| < d_th, and angle(n_i, n_j) < theta_th.
Adjacency build_adjacency(const std::vector<SteppablePoint>& steppable,
                          const SegmentationParams& params, double resolution);

/// Iterative min-label propagation with atomic updates until a full pass
/// changes nothing. Final labels equal the connected-component minimum of
/// the initial ordinals, independent of edge-processing order.
ClusterSet label_components(const std::vector<SteppablePoint>& steppable,
                            const Adjacency& adjacency);

/// Clusters with at least min_size members, in label order.
std::vector<Cluster> filter_clusters(const ClusterSet& set, int min_size);

/// Plain-text dump, one "x y z label nx ny nz" line per steppable voxel.
void dump_labeled_points(const std::string& path, const ClusterSet& set);

}  // namespace voxplane
