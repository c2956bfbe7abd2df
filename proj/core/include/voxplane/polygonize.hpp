#pragma once

#include <optional>
#include <span>
#include <vector>

#include "voxplane/plane_fit.hpp"
#include "voxplane/types.hpp"

namespace voxplane {

/// Deterministic orthonormal in-plane frame: u is the normalized projection
/// of the world axis least aligned with the normal (lowest axis index on
/// ties), v = n x u, origin is the plane point closest to the world origin.
struct PlaneBasis {
  Vec3 u;
  Vec3 v;
  Vec3 origin;
};

PlaneBasis plane_basis(const PlaneModel& plane);

/// In-plane coordinates ((p - origin) . u, (p - origin) . v); preserves
/// in-plane distances.
std::vector<Vec2> project_to_plane(const PlaneModel& plane, std::span<const Vec3> points);

Vec3 lift_from_plane(const PlaneBasis& basis, const Vec2& q);

/// Sound convex-hull prefilter: drops points strictly inside the polygon of
/// extreme points along `directions` fixed directions. Every true hull
/// vertex survives; input order is preserved among survivors.
std::vector<Vec2> hull_filter(std::span<const Vec2> points, int directions = 16);

/// Exact strict convex hull by monotone chain: CCW, starts at the
/// lexicographic minimum, collinear edge-interior points dropped. Empty
/// result when all points are collinear.
std::vector<Vec2> monotone_chain(std::span<const Vec2> points);

/// hull_filter then monotone_chain; identical to the raw chain on all inputs.
std::vector<Vec2> convex_hull(std::span<const Vec2> points, int directions = 16);

/// Shoelace area; positive for CCW rings.
double polygon_area(std::span<const Vec2> ring);

/// True when p is inside or on the convex CCW ring within `slack` meters.
bool point_in_convex(std::span<const Vec2> ring, const Vec2& p, double slack = 0.0);

/// Boundary polygon of one fitted plane.
struct PlanePolygon {
  PlaneModel plane;
  std::vector<Vec2> vertices2d;  // CCW, strictly convex
  std::vector<Vec3> vertices3d;  // vertices2d lifted onto the plane
  double area = 0.0;
};

/// Project inliers, filter, hull, lift. nullopt when the projected points
/// are all collinear (no polygon for this cluster).
std::optional<PlanePolygon> make_polygon(const PlaneModel& plane,
                                         std::span<const Vec3> inliers,
                                         int filter_directions = 16);

}  // namespace voxplane
