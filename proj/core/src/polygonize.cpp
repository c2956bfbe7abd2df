#include "voxplane/polygonize.hpp"

#include <algorithm>
#include <cmath>

#include "voxplane/parallel.hpp"

namespace voxplane {
namespace {

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

bool lex_less(const Vec2& a, const Vec2& b) {
  return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
}

}  // namespace

PlaneBasis plane_basis(const PlaneModel& plane) {
  const Vec3& n = plane.normal;
  int least = 0;
  for (int k = 1; k < 3; ++k)
    if (std::abs(n[k]) < std::abs(n[least])) least = k;
  Vec3 axis = Vec3::Zero();
  axis[least] = 1.0;

  PlaneBasis basis;
  basis.u = (axis - n.dot(axis) * n).normalized();
  basis.v = n.cross(basis.u);
  basis.origin = plane.offset * n;
  return basis;
}

std::vector<Vec2> project_to_plane(const PlaneModel& plane, std::span<const Vec3> points) {
  const PlaneBasis basis = plane_basis(plane);
  std::vector<Vec2> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 d = points[i] - basis.origin;
    out[i] = Vec2(d.dot(basis.u), d.dot(basis.v));
  }
  return out;
}

Vec3 lift_from_plane(const PlaneBasis& basis, const Vec2& q) {
  return basis.origin + q.x() * basis.u + q.y() * basis.v;
}

std::vector<Vec2> hull_filter(std::span<const Vec2> points, int directions) {
  if (points.size() <= 3 || directions < 3) return {points.begin(), points.end()};

  // extreme point along each direction; ties go to the lexicographic
  // smaller point so the reduction has a total order
  struct Extreme {
    double dot = -std::numeric_limits<double>::infinity();
    Vec2 point = Vec2::Zero();
  };
  std::vector<Vec2> dirs(directions);
  for (int j = 0; j < directions; ++j) {
    const double a = 2.0 * M_PI * j / directions;
    dirs[j] = Vec2(std::cos(a), std::sin(a));
  }

  const unsigned nchunks = 4 * std::max(1u, thread_count());
  const std::size_t chunk = points.size() / nchunks + 1;
  std::vector<std::vector<Extreme>> partial(nchunks + 1,
                                            std::vector<Extreme>(directions));
  parallel_for_chunks(points.size(), chunk, [&](std::size_t b, std::size_t e) {
    std::vector<Extreme>& ext = partial[b / chunk];
    for (std::size_t i = b; i < e; ++i) {
      for (int j = 0; j < directions; ++j) {
        const double d = points[i].dot(dirs[j]);
        Extreme& x = ext[j];
        if (d > x.dot || (d == x.dot && lex_less(points[i], x.point))) {
          x.dot = d;
          x.point = points[i];
        }
      }
    }
  });
  std::vector<Vec2> extremes;
  for (int j = 0; j < directions; ++j) {
    Extreme best;
    for (const auto& ext : partial) {
      const Extreme& x = ext[j];
      if (x.dot > best.dot || (x.dot == best.dot && lex_less(x.point, best.point)))
        best = x;
    }
    extremes.push_back(best.point);
  }

  const std::vector<Vec2> inner = monotone_chain(extremes);
  if (inner.size() < 3) return {points.begin(), points.end()};

  std::vector<std::uint8_t> keep(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    // survives unless strictly inside the inner polygon
    const Vec2& p = points[i];
    for (std::size_t k = 0; k < inner.size(); ++k) {
      const Vec2& a = inner[k];
      const Vec2& b = inner[(k + 1) % inner.size()];
      if (cross2(a, b, p) <= 0.0) {
        keep[i] = 1;
        return;
      }
    }
  });

  std::vector<Vec2> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (keep[i]) out.push_back(points[i]);
  return out;
}

std::vector<Vec2> monotone_chain(std::span<const Vec2> points) {
  std::vector<Vec2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2& a, const Vec2& b) { return a == b; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return {};

  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
    while (k >= lower && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first
  if (hull.size() < 3) return {};
  return hull;
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points, int directions) {
  const std::vector<Vec2> survivors = hull_filter(points, directions);
  return monotone_chain(survivors);
}

double polygon_area(std::span<const Vec2> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[(i + 1) % ring.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

bool point_in_convex(std::span<const Vec2> ring, const Vec2& p, double slack) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[(i + 1) % ring.size()];
    const double len = (b - a).norm();
    if (cross2(a, b, p) < -slack * (len > 0.0 ? len : 1.0)) return false;
  }
  return true;
}

std::optional<PlanePolygon> make_polygon(const PlaneModel& plane,
                                         std::span<const Vec3> inliers,
                                         int filter_directions) {
  if (inliers.size() < 3) return std::nullopt;
  const std::vector<Vec2> projected = project_to_plane(plane, inliers);
  std::vector<Vec2> ring = convex_hull(projected, filter_directions);
  if (ring.size() < 3) return std::nullopt;

  PlanePolygon poly;
  poly.plane = plane;
  poly.vertices2d = std::move(ring);
  const PlaneBasis basis = plane_basis(plane);
  poly.vertices3d.reserve(poly.vertices2d.size());
  for (const Vec2& q : poly.vertices2d) poly.vertices3d.push_back(lift_from_plane(basis, q));
  poly.area = polygon_area(poly.vertices2d);
  return poly;
}

}  // namespace voxplane
