#pragma once

// Independent reference implementations used only by tests. Each oracle
// deliberately takes a different algorithmic route than the library code it
// checks: closed-form eigenvalues vs Jacobi sweeps, union-find vs label
// propagation, gift wrapping vs filtered monotone chain, sorted boundary
// crossings vs incremental DDA stepping.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <vector>

#include "voxplane/types.hpp"
#include "voxplane/voxel_grid.hpp"

namespace oracle {

using voxplane::Mat3;
using voxplane::Vec2;
using voxplane::Vec3;
using voxplane::Vec3i;

struct EigenResult {
  Vec3 values;   // ascending
  Mat3 vectors;  // columns, paired with values
};

// Smith's trigonometric closed-form solution of the characteristic
// polynomial for a symmetric 3x3 matrix; eigenvectors from cross products
// of rows of (A - lambda I).
inline EigenResult eigen_sym3_closed_form(const Mat3& a) {
  EigenResult out;
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  if (p1 == 0.0) {
    Vec3 d = a.diagonal();
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int i, int j) { return d[i] < d[j]; });
    for (int k = 0; k < 3; ++k) {
      out.values[k] = d[order[k]];
      out.vectors.col(k) = Vec3::Unit(order[k]);
    }
    return out;
  }
  const double q = a.trace() / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Mat3 b = (a - q * Mat3::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;

  const double e_max = q + 2.0 * p * std::cos(phi);
  const double e_min = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  const double e_mid = 3.0 * q - e_max - e_min;
  out.values = Vec3(e_min, e_mid, e_max);

  for (int k = 0; k < 3; ++k) {
    const Mat3 m = a - out.values[k] * Mat3::Identity();
    const Vec3 r0 = m.row(0), r1 = m.row(1), r2 = m.row(2);
    const Vec3 c01 = r0.cross(r1), c02 = r0.cross(r2), c12 = r1.cross(r2);
    Vec3 v = c01;
    if (c02.squaredNorm() > v.squaredNorm()) v = c02;
    if (c12.squaredNorm() > v.squaredNorm()) v = c12;
    out.vectors.col(k) = v.normalized();
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void merge(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

  // canonical labels: every node gets the minimum node id of its component
  std::vector<std::int32_t> canonical_labels() {
    std::vector<std::int32_t> min_of_root(parent_.size(),
                                          static_cast<std::int32_t>(parent_.size()));
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      const std::size_t r = find(i);
      min_of_root[r] = std::min(min_of_root[r], static_cast<std::int32_t>(i));
    }
    std::vector<std::int32_t> labels(parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i)
      labels[i] = min_of_root[find(i)];
    return labels;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Gift-wrapping (Jarvis) strict hull: CCW from the lexicographic minimum,
// collinear edge-interior points skipped by preferring the farthest point.
inline std::vector<Vec2> brute_force_hull(const std::vector<Vec2>& points) {
  std::vector<Vec2> pts = points;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a == b; }),
            pts.end());
  if (pts.size() < 3) return {};

  const auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };

  std::vector<Vec2> hull;
  const Vec2 start = pts.front();
  Vec2 current = start;
  for (std::size_t guard = 0; guard <= pts.size(); ++guard) {
    hull.push_back(current);
    Vec2 next = pts[0] == current ? pts[1] : pts[0];
    for (const Vec2& k : pts) {
      if (k == current) continue;
      const double c = cross(current, next, k);
      if (c < 0.0 ||
          (c == 0.0 && (k - current).squaredNorm() > (next - current).squaredNorm()))
        next = k;
    }
    if (next == start) break;
    current = next;
  }
  if (hull.size() < 3) return {};
  return hull;
}

// Total-least-squares plane through points: smallest-eigenvalue eigenvector
// of the covariance via the closed-form solver, normal flipped upward.
struct TlsPlane {
  Vec3 normal;
  double offset;
};

inline TlsPlane tls_plane(const std::vector<Vec3>& points) {
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : points) {
    const Vec3 d = p - centroid;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());
  const EigenResult eig = eigen_sym3_closed_form(cov);
  Vec3 n = eig.vectors.col(0);
  if (n.z() < 0.0) n = -n;
  return {n, n.dot(centroid)};
}

// Cells traversed by segment [a, b] inside the grid window, via sorted
// boundary-crossing parameters (each interval between crossings lies in
// exactly one cell). Excludes the cells containing a and b.
inline std::set<std::size_t> segment_cells_reference(const voxplane::VoxelGrid& grid,
                                                     const Vec3& a, const Vec3& b) {
  const double res = grid.resolution();
  const Vec3 d = b - a;
  const Vec3 lo = grid.origin();
  const Vec3 hi = lo + grid.extent().cast<double>() * res;

  double t0 = 0.0, t1 = 1.0;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (a[k] < lo[k] || a[k] >= hi[k]) return {};
      continue;
    }
    double ta = (lo[k] - a[k]) / d[k];
    double tb = (hi[k] - a[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1) return {};

  std::vector<double> ts = {t0, t1};
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) continue;
    const int first = static_cast<int>(std::ceil((std::min(a[k], b[k]) - lo[k]) / res));
    const int last = static_cast<int>(std::floor((std::max(a[k], b[k]) - lo[k]) / res));
    for (int i = first; i <= last; ++i) {
      const double t = (lo[k] + i * res - a[k]) / d[k];
      if (t > t0 && t < t1) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());

  const Vec3i origin_cell = grid.world_to_index(a);
  const Vec3i end_cell = grid.world_to_index(b);
  std::set<std::size_t> cells;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] < 1e-15) continue;
    const Vec3 mid = a + (0.5 * (ts[i] + ts[i + 1])) * d;
    const Vec3i cell = grid.world_to_index(mid);
    if (!grid.in_bounds(cell)) continue;
    if (cell == origin_cell || cell == end_cell) continue;
    cells.insert(grid.flat(cell));
  }
  return cells;
}

}  // namespace oracle
