#include "voxplane/plane_fit.hpp"

#include <cmath>
#include <limits>

#include "voxplane/jacobi.hpp"
#include "voxplane/parallel.hpp"
#include "voxplane/rng.hpp"

namespace voxplane {
namespace {

struct Candidate {
  Vec3 normal = Vec3::Zero();
  double offset = 0.0;
  int inliers = -1;  // -1: degenerate sample, no candidate
};

// Plane from the (cluster label, iteration) random stream. The triangle
// area gate rejects (near-)collinear samples.
Candidate sample_candidate(const std::vector<SteppablePoint>& pts, std::int32_t label,
                           int iteration, const RansacParams& params) {
  CounterRng rng(params.seed, static_cast<std::uint64_t>(static_cast<std::uint32_t>(label)),
                 static_cast<std::uint64_t>(iteration));
  const std::uint32_t n = static_cast<std::uint32_t>(pts.size());
  const std::uint32_t a = rng.below(n);
  std::uint32_t b = rng.below(n);
  while (b == a) b = rng.below(n);
  std::uint32_t c = rng.below(n);
  while (c == a || c == b) c = rng.below(n);

  const Vec3& p0 = pts[a].mean;
  const Vec3 e1 = pts[b].mean - p0;
  const Vec3 e2 = pts[c].mean - p0;
  const Vec3 cross = e1.cross(e2);
  const double norm = cross.norm();
  Candidate cand;
  if (0.5 * norm <= 1e-10) return cand;  // area gate
  cand.normal = orient_up(cross / norm, params.up);
  cand.offset = cand.normal.dot(p0);
  cand.inliers = 0;
  return cand;
}

int count_inliers(const std::vector<SteppablePoint>& pts, const Candidate& cand,
                  double eps) {
  int count = 0;
  for (const SteppablePoint& p : pts)
    if (std::abs(cand.normal.dot(p.mean) - cand.offset) <= eps) ++count;
  return count;
}

}  // namespace

std::vector<ClusterFit> fit_planes(const std::vector<Cluster>& clusters,
                                   const RansacParams& params, FitStats* stats) {
  FitStats local;
  std::vector<const Cluster*> eligible;
  for (const Cluster& c : clusters) {
    if (c.members.size() < 3)
      ++local.clusters_skipped_small;
    else
      eligible.push_back(&c);
  }

  const std::size_t nc = eligible.size();
  const std::size_t ni = static_cast<std::size_t>(params.iterations);
  std::vector<Candidate> candidates(nc * ni);
  std::vector<int> winner(nc, -1);

  const auto sample_one = [&](std::size_t c, std::size_t i) {
    candidates[c * ni + i] =
        sample_candidate(eligible[c]->members, eligible[c]->label, static_cast<int>(i), params);
  };
  const auto count_one = [&](std::size_t c, std::size_t i) {
    Candidate& cand = candidates[c * ni + i];
    if (cand.inliers >= 0)
      cand.inliers = count_inliers(eligible[c]->members, cand, params.inlier_eps);
  };
  const auto select_one = [&](std::size_t c) {
    int best = -1, best_count = -1;
    for (std::size_t i = 0; i < ni; ++i) {
      const int count = candidates[c * ni + i].inliers;
      if (count > best_count) {  // strict: ties keep the lowest iteration
        best_count = count;
        best = static_cast<int>(i);
      }
    }
    if (best_count >= 0) winner[c] = best;
  };

  std::vector<ClusterFit> fits(nc);
  const auto extract_one = [&](std::size_t c) {
    if (winner[c] < 0) return;
    const Candidate& cand = candidates[c * ni + winner[c]];
    ClusterFit& fit = fits[c];
    fit.model.normal = cand.normal;
    fit.model.offset = cand.offset;
    fit.model.inlier_count = cand.inliers;
    fit.model.cluster_label = eligible[c]->label;
    fit.inliers.reserve(cand.inliers);
    for (const SteppablePoint& p : eligible[c]->members)
      if (std::abs(cand.normal.dot(p.mean) - cand.offset) <= params.inlier_eps)
        fit.inliers.push_back(p.mean);
  };

  if (params.execution == RansacExecution::ClusterParallel) {
    parallel_for(nc * ni, [&](std::size_t t) { sample_one(t / ni, t % ni); });
    parallel_for(nc * ni, [&](std::size_t t) { count_one(t / ni, t % ni); }, 1);
    parallel_for(nc, [&](std::size_t c) { select_one(c); }, 1);
    parallel_for(nc, [&](std::size_t c) { extract_one(c); }, 1);
  } else {
    for (std::size_t c = 0; c < nc; ++c) {
      parallel_for(ni, [&](std::size_t i) { sample_one(c, i); });
      parallel_for(ni, [&](std::size_t i) { count_one(c, i); }, 1);
      select_one(c);
      parallel_for(1, [&](std::size_t) { extract_one(c); });
    }
  }

  std::vector<ClusterFit> out;
  out.reserve(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    if (winner[c] < 0)
      ++local.clusters_unfit;
    else
      out.push_back(std::move(fits[c]));
  }
  if (stats) *stats = local;
  return out;
}

PlaneModel refine_plane(std::span<const Vec3> inliers, const PlaneModel& initial,
                        const Vec3& up) {
  if (inliers.size() < 3) return initial;
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : inliers) sum += p;
  const Vec3 centroid = sum / static_cast<double>(inliers.size());
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : inliers) {
    const Vec3 d = p - centroid;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(inliers.size());

  const EigenSym3 eig = jacobi_eigen_sym3(cov);
  if (eig.eigenvalues[1] <= 1e-12 + 1e-9 * std::abs(eig.eigenvalues[2]))
    return initial;  // rank-deficient inlier set

  PlaneModel refined = initial;
  refined.normal = orient_up(eig.eigenvectors.col(0).normalized(), up);
  refined.offset = refined.normal.dot(centroid);
  return refined;
}

}  // namespace voxplane
