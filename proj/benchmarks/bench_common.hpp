#pragma once

#include <vector>

#include "voxplane/rng.hpp"
#include "voxplane/segmentation.hpp"
#include "voxplane/types.hpp"

namespace bench {

using namespace voxplane;

// noisy plane patch in sensor coordinates
inline SensorFrame plane_frame(int points, double z, double sigma, std::uint64_t seed) {
  CounterRng rng(seed);
  SensorFrame frame;
  frame.points.reserve(points);
  for (int i = 0; i < points; ++i)
    frame.points.push_back(Vec3(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9),
                                z + sigma * rng.normal())
                               .cast<float>());
  return frame;
}

inline std::vector<Cluster> synthetic_clusters(int count, int points, std::uint64_t seed) {
  std::vector<Cluster> clusters(count);
  for (int c = 0; c < count; ++c) {
    CounterRng rng(seed, c, 11);
    clusters[c].label = c;
    clusters[c].members.resize(points);
    for (int i = 0; i < points; ++i)
      clusters[c].members[i] = {Vec3i::Zero(),
                                Vec3(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                     0.2 + 0.003 * rng.normal()),
                                Vec3::UnitZ()};
  }
  return clusters;
}

}  // namespace bench
