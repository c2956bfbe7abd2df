#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "voxplane/segmentation.hpp"
#include "voxplane/types.hpp"

namespace voxplane {

/// Plane n . x = offset, unit normal in the up hemisphere.
struct PlaneModel {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
  int inlier_count = 0;
  std::int32_t cluster_label = -1;
};

/// Execution layout of the RANSAC stages. ClusterParallel launches one
/// parallel region per stage spanning every (cluster, iteration) pair;
/// PerClusterSerial processes clusters one at a time, each with its own
/// per-stage regions (the paper's "w/o cluster parallelization" baseline).
/// Both produce identical output for a fixed seed.
enum class RansacExecution { ClusterParallel, PerClusterSerial };

struct RansacParams {
  int iterations = 100;        // I
  double inlier_eps = 0.01;    // epsilon, meters
  std::uint64_t seed = 0;
  Vec3 up = Vec3::UnitZ();
  RansacExecution execution = RansacExecution::ClusterParallel;
};

struct ClusterFit {
  PlaneModel model;
  std::vector<Vec3> inliers;  // C'_i, in cluster point order
};

struct FitStats {
  std::size_t clusters_skipped_small = 0;  // fewer than 3 points
  std::size_t clusters_unfit = 0;          // every sample degenerate
};

/// One plane per cluster. Stage (a) draws I candidate planes from 3-point
/// samples, each (cluster, iteration) owning the deterministic random
/// stream keyed by (seed, label, iteration); stage (b) counts points with
/// |n.x - offset| <= eps; stage (c) keeps the candidate with the most
/// inliers (ties to the lowest iteration) and extracts its inliers.
/// Samples spanning a triangle of area <= 1e-10 m^2 are skipped.
std::vector<ClusterFit> fit_planes(const std::vector<Cluster>& clusters,
                                   const RansacParams& params, FitStats* stats = nullptr);

/// Total-least-squares polish: plane through the smallest-eigenvalue
/// eigenvector of the inlier covariance. Returns `initial` unchanged when
/// the inlier set is rank-deficient.
PlaneModel refine_plane(std::span<const Vec3> inliers, const PlaneModel& initial,
                        const Vec3& up = Vec3::UnitZ());

}  // namespace voxplane
