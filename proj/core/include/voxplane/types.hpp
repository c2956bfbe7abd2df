#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace voxplane {

using Vec3 = Eigen::Vector3d;
using Vec3f = Eigen::Vector3f;
using Vec3i = Eigen::Vector3i;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;

/// Voxel status: a voxel is Free exactly when its point count is zero.
enum class VoxelStatus : std::uint8_t { Free = 0, Occupied = 1, Steppable = 2 };

/// Materialized view of one occupied voxel (mean = accumulated sum / count).
struct OccupiedVoxel {
  Vec3i index;
  Vec3 mean;
  std::uint32_t count = 0;
  VoxelStatus status = VoxelStatus::Free;
};

/// Rigid transform sensor->world.
struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

/// True when rotation is orthonormal with determinant +1 (tolerance 1e-6).
bool is_valid_rotation(const Mat3& r, double tol = 1e-6);

constexpr double kRadToDeg = 57.295779513082320876798;
constexpr double kDegToRad = 0.017453292519943295769237;

/// Flip n into the up hemisphere; exactly perpendicular normals get a
/// canonical sign (first nonzero component positive) so results do not
/// depend on which side produced them.
inline Vec3 orient_up(const Vec3& n, const Vec3& up) {
  const double d = n.dot(up);
  if (d < 0.0) return -n;
  if (d > 0.0) return n;
  for (int k = 0; k < 3; ++k) {
    if (n[k] > 0.0) return n;
    if (n[k] < 0.0) return -n;
  }
  return n;
}

/// One pose-stamped sensor scan. Points are in the sensor frame; float
/// storage matches the binary frame format so that a written-then-read
/// stream is bit-identical to the in-memory one.
struct SensorFrame {
  std::vector<Vec3f> points;
  Pose pose;
  double timestamp = 0.0;
};

struct UpdateStats {
  std::size_t voxels_touched = 0;
  std::size_t points_discarded = 0;
};

struct ClearStats {
  std::size_t voxels_cleared = 0;  // unique interior voxels reset
  std::size_t voxels_freed = 0;    // subset that was occupied before the call
};

struct ShiftStats {
  Vec3i shift = Vec3i::Zero();
  std::size_t voxels_dropped = 0;
};

}  // namespace voxplane
