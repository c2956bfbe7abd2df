#pragma once

#include <string>
#include <vector>

#include "voxplane/polygonize.hpp"

namespace voxplane {

// Polygon document, one per frame. Fixed field order per polygon:
//
//   polygon
//   normal <nx> <ny> <nz>
//   offset <d>
//   vertices <k>
//   <x> <y> <z>          (k lines, CCW)
//   area <a>
//   label <cluster or region id>
//   inliers <n>
//
// Lines starting with '#' and blank lines are ignored on read. Values are
// printed with %.9g, so identical inputs produce byte-identical files.

void write_polygons(const std::string& path, const std::vector<PlanePolygon>& polygons);
std::vector<PlanePolygon> read_polygons(const std::string& path);

}  // namespace voxplane
