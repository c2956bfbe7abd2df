#include "voxplane/polygon_io.hpp"

#include "voxplane/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voxplane {
namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

bool next_content_line(std::istream& is, std::string& out) {
  while (std::getline(is, out)) {
    const std::size_t i = out.find_first_not_of(" \t\r");
    if (i == std::string::npos || out[i] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

void write_polygons(const std::string& path, const std::vector<PlanePolygon>& polygons) {
  std::ofstream os(path);
  if (!os) throw OutputError("polygons: cannot open for write: " + path);
  os << "# voxplane polygons v1\n";
  for (const PlanePolygon& p : polygons) {
    os << "polygon\n";
    os << "normal " << fmt(p.plane.normal.x()) << ' ' << fmt(p.plane.normal.y()) << ' '
       << fmt(p.plane.normal.z()) << '\n';
    os << "offset " << fmt(p.plane.offset) << '\n';
    os << "vertices " << p.vertices3d.size() << '\n';
    for (const Vec3& v : p.vertices3d)
      os << fmt(v.x()) << ' ' << fmt(v.y()) << ' ' << fmt(v.z()) << '\n';
    os << "area " << fmt(p.area) << '\n';
    os << "label " << p.plane.cluster_label << '\n';
    os << "inliers " << p.plane.inlier_count << '\n';
  }
  if (!os) throw OutputError("polygons: write failed: " + path);
}

std::vector<PlanePolygon> read_polygons(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingInputError("polygons: cannot open: " + path);

  std::vector<PlanePolygon> out;
  std::string line;
  const auto expect = [&](const char* field) -> std::istringstream {
    if (!next_content_line(is, line))
      throw std::runtime_error(std::string("polygons: missing '") + field + "' in " + path);
    std::istringstream ss(line);
    std::string kw;
    ss >> kw;
    if (kw != field)
      throw std::runtime_error(std::string("polygons: expected '") + field + "', got '" +
                               kw + "' in " + path);
    return ss;
  };

  while (next_content_line(is, line)) {
    std::istringstream head(line);
    std::string kw;
    head >> kw;
    if (kw != "polygon") throw std::runtime_error("polygons: expected 'polygon' in " + path);

    PlanePolygon poly;
    {
      auto ss = expect("normal");
      ss >> poly.plane.normal.x() >> poly.plane.normal.y() >> poly.plane.normal.z();
      if (!ss) throw std::runtime_error("polygons: malformed normal in " + path);
    }
    {
      auto ss = expect("offset");
      ss >> poly.plane.offset;
      if (!ss) throw std::runtime_error("polygons: malformed offset in " + path);
    }
    std::size_t k = 0;
    {
      auto ss = expect("vertices");
      ss >> k;
      if (!ss) throw std::runtime_error("polygons: malformed vertex count in " + path);
    }
    poly.vertices3d.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (!next_content_line(is, line))
        throw std::runtime_error("polygons: truncated vertex list in " + path);
      std::istringstream vs(line);
      vs >> poly.vertices3d[i].x() >> poly.vertices3d[i].y() >> poly.vertices3d[i].z();
      if (!vs) throw std::runtime_error("polygons: malformed vertex in " + path);
    }
    {
      auto ss = expect("area");
      ss >> poly.area;
    }
    {
      auto ss = expect("label");
      ss >> poly.plane.cluster_label;
    }
    {
      auto ss = expect("inliers");
      ss >> poly.plane.inlier_count;
    }

    // reconstruct the in-plane ring from the stored 3D vertices
    const PlaneBasis basis = plane_basis(poly.plane);
    poly.vertices2d.reserve(k);
    for (const Vec3& v : poly.vertices3d) {
      const Vec3 d = v - basis.origin;
      poly.vertices2d.emplace_back(d.dot(basis.u), d.dot(basis.v));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace voxplane
