#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "voxplane/rng.hpp"
#include "voxplane/types.hpp"

namespace testsup {

using voxplane::CounterRng;
using voxplane::Mat3;
using voxplane::Pose;
using voxplane::SensorFrame;
using voxplane::Vec2;
using voxplane::Vec3;
using voxplane::Vec3f;

inline Mat3 random_rotation(CounterRng& rng) {
  // Gram-Schmidt on random vectors; det forced to +1
  Vec3 a(rng.normal(), rng.normal(), rng.normal());
  Vec3 b(rng.normal(), rng.normal(), rng.normal());
  a.normalize();
  b = (b - a.dot(b) * a).normalized();
  Mat3 r;
  r.col(0) = a;
  r.col(1) = b;
  r.col(2) = a.cross(b);
  return r;
}

inline Mat3 random_symmetric(CounterRng& rng, double scale = 1.0) {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = scale * rng.uniform(-1.0, 1.0);
  return m;
}

/// Identity-pose frame holding the given world points.
inline SensorFrame frame_of(const std::vector<Vec3>& points) {
  SensorFrame f;
  f.points.reserve(points.size());
  for (const Vec3& p : points) f.points.push_back(p.cast<float>());
  return f;
}

/// Points on the plane n.x = offset, uniform over a square patch of the
/// given extent, with Gaussian off-plane noise sigma.
inline std::vector<Vec3> plane_points(const Vec3& normal, double offset, int count,
                                      double extent, double sigma, CounterRng& rng) {
  const Vec3 n = normal.normalized();
  int least = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(n[k]) < std::abs(n[least])) least = k;
  const Vec3 u = (Vec3::Unit(least) - n[least] * n).normalized();
  const Vec3 v = n.cross(u);

  std::vector<Vec3> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double a = rng.uniform(-0.5 * extent, 0.5 * extent);
    const double b = rng.uniform(-0.5 * extent, 0.5 * extent);
    const double w = sigma > 0.0 ? sigma * rng.normal() : 0.0;
    pts.push_back(offset * n + a * u + b * v + w * n);
  }
  return pts;
}

/// Fresh scratch directory under the build tree.
inline std::string scratch_dir(const std::string& tag) {
  const std::filesystem::path dir = std::filesystem::path("test_scratch") / tag;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

inline bool files_identical(const std::string& a, const std::string& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  return ca == cb;
}

}  // namespace testsup
