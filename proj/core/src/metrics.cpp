#include "voxplane/metrics.hpp"

#include "voxplane/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voxplane {
namespace {

constexpr double kNormalGateDeg = 20.0;

// both rings in the truth plane's frame; empty when degenerate
struct ProjectedPair {
  std::vector<Vec2> detected;
  std::vector<Vec2> truth;
  bool ok = false;
};

ProjectedPair project_pair(const PlanePolygon& detected, const PlanePolygon& truth) {
  ProjectedPair pair;
  if (detected.vertices3d.size() < 3 || truth.vertices3d.size() < 3) return pair;
  const double dot = std::clamp(detected.plane.normal.dot(truth.plane.normal), -1.0, 1.0);
  if (std::acos(dot) * kRadToDeg > kNormalGateDeg) return pair;

  const PlaneBasis basis = plane_basis(truth.plane);
  const auto project = [&](const std::vector<Vec3>& verts) {
    std::vector<Vec2> ring;
    ring.reserve(verts.size());
    for (const Vec3& v : verts) {
      const Vec3 d = v - basis.origin;
      ring.emplace_back(d.dot(basis.u), d.dot(basis.v));
    }
    return ring;
  };
  pair.detected = project(detected.vertices3d);
  pair.truth = project(truth.vertices3d);
  if (std::abs(polygon_area(pair.detected)) < 1e-12 ||
      std::abs(polygon_area(pair.truth)) < 1e-12)
    return pair;
  pair.ok = true;
  return pair;
}

// clip a convex subject ring against one half-plane (left of a->b)
std::vector<Vec2> clip_edge(const std::vector<Vec2>& subject, const Vec2& a, const Vec2& b) {
  std::vector<Vec2> out;
  const Vec2 e = b - a;
  const auto side = [&](const Vec2& p) {
    return e.x() * (p.y() - a.y()) - e.y() * (p.x() - a.x());
  };
  for (std::size_t i = 0; i < subject.size(); ++i) {
    const Vec2& cur = subject[i];
    const Vec2& nxt = subject[(i + 1) % subject.size()];
    const double sc = side(cur), sn = side(nxt);
    if (sc >= 0.0) out.push_back(cur);
    if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

}  // namespace

double plane_iou(const PlanePolygon& detected, const PlanePolygon& truth,
                 double raster_res) {
  const ProjectedPair pair = project_pair(detected, truth);
  if (!pair.ok) return 0.0;

  Vec2 lo = pair.truth[0], hi = pair.truth[0];
  for (const auto* ring : {&pair.detected, &pair.truth}) {
    for (const Vec2& p : *ring) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  }
  const int nx = std::max(1, static_cast<int>(std::ceil((hi.x() - lo.x()) / raster_res)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi.y() - lo.y()) / raster_res)));

  std::size_t inter = 0, uni = 0;
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      const Vec2 c(lo.x() + (ix + 0.5) * raster_res, lo.y() + (iy + 0.5) * raster_res);
      const bool in_a = point_in_convex(pair.detected, c);
      const bool in_b = point_in_convex(pair.truth, c);
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double plane_iou_exact(const PlanePolygon& detected, const PlanePolygon& truth) {
  const ProjectedPair pair = project_pair(detected, truth);
  if (!pair.ok) return 0.0;

  std::vector<Vec2> clipped = pair.detected;
  for (std::size_t i = 0; i < pair.truth.size() && clipped.size() >= 3; ++i)
    clipped = clip_edge(clipped, pair.truth[i], pair.truth[(i + 1) % pair.truth.size()]);

  const double inter = clipped.size() >= 3 ? std::abs(polygon_area(clipped)) : 0.0;
  const double a = std::abs(polygon_area(pair.detected));
  const double b = std::abs(polygon_area(pair.truth));
  const double uni = a + b - inter;
  return uni <= 0.0 ? 0.0 : inter / uni;
}

IoUReport match_planes(std::span<const PlanePolygon> detected,
                       std::span<const PlanePolygon> truth) {
  IoUReport report;
  report.truth_count = truth.size();
  report.detected_count = detected.size();

  struct Pair {
    double iou;
    int truth_id;
    int detected_id;
  };
  std::vector<Pair> pairs;
  for (std::size_t t = 0; t < truth.size(); ++t)
    for (std::size_t d = 0; d < detected.size(); ++d) {
      const double iou = plane_iou(detected[d], truth[t]);
      if (iou > 0.0) pairs.push_back({iou, static_cast<int>(t), static_cast<int>(d)});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.truth_id != b.truth_id) return a.truth_id < b.truth_id;
    return a.detected_id < b.detected_id;
  });

  std::vector<bool> truth_used(truth.size()), detected_used(detected.size());
  for (const Pair& p : pairs) {
    if (truth_used[p.truth_id] || detected_used[p.detected_id]) continue;
    truth_used[p.truth_id] = true;
    detected_used[p.detected_id] = true;
    report.matches.push_back({p.detected_id, p.truth_id, p.iou});
  }
  std::sort(report.matches.begin(), report.matches.end(),
            [](const PlaneMatch& a, const PlaneMatch& b) { return a.truth_id < b.truth_id; });

  double sum = 0.0, weighted = 0.0, total_area = 0.0;
  std::vector<double> truth_iou(truth.size(), 0.0);
  for (const PlaneMatch& m : report.matches) truth_iou[m.truth_id] = m.iou;
  for (std::size_t t = 0; t < truth.size(); ++t) {
    sum += truth_iou[t];
    weighted += truth_iou[t] * std::abs(truth[t].area);
    total_area += std::abs(truth[t].area);
  }
  report.mean_iou = truth.empty() ? 0.0 : sum / truth.size();
  report.area_weighted_iou = total_area > 0.0 ? weighted / total_area : 0.0;
  report.unmatched_truth = truth.size() - report.matches.size();
  report.unmatched_detected = detected.size() - report.matches.size();
  return report;
}

namespace {
std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}
}  // namespace

void write_iou_report(const std::string& path, const IoUReport& report) {
  std::ofstream os(path);
  if (!os) throw OutputError("iou report: cannot open for write: " + path);
  os << "# voxplane iou report v1\n";
  os << "truth_planes " << report.truth_count << '\n';
  os << "detected_planes " << report.detected_count << '\n';
  os << "matched " << report.matches.size() << '\n';
  os << "unmatched_truth " << report.unmatched_truth << '\n';
  os << "unmatched_detected " << report.unmatched_detected << '\n';
  os << "mean_iou " << fmt(report.mean_iou) << '\n';
  os << "area_weighted_iou " << fmt(report.area_weighted_iou) << '\n';
  for (const PlaneMatch& m : report.matches)
    os << "match truth=" << m.truth_id << " detected=" << m.detected_id << " iou="
       << fmt(m.iou) << '\n';
  if (!os) throw std::runtime_error("iou report: write failed: " + path);
}

IoUReport read_iou_report(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingInputError("iou report: cannot open: " + path);
  IoUReport report;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "truth_planes") ss >> report.truth_count;
    else if (key == "detected_planes") ss >> report.detected_count;
    else if (key == "unmatched_truth") ss >> report.unmatched_truth;
    else if (key == "unmatched_detected") ss >> report.unmatched_detected;
    else if (key == "mean_iou") ss >> report.mean_iou;
    else if (key == "area_weighted_iou") ss >> report.area_weighted_iou;
    else if (key == "match") {
      PlaneMatch m;
      std::string field;
      while (ss >> field) {
        if (field.rfind("truth=", 0) == 0) m.truth_id = std::stoi(field.substr(6));
        else if (field.rfind("detected=", 0) == 0) m.detected_id = std::stoi(field.substr(9));
        else if (field.rfind("iou=", 0) == 0) m.iou = std::stod(field.substr(4));
      }
      report.matches.push_back(m);
    }
  }
  return report;
}

std::string format_iou_table(const IoUReport& report) {
  std::ostringstream os;
  os << "truth  detected  iou\n";
  char buf[96];
  for (const PlaneMatch& m : report.matches) {
    std::snprintf(buf, sizeof buf, "%5d  %8d  %.4f\n", m.truth_id, m.detected_id, m.iou);
    os << buf;
  }
  std::snprintf(buf, sizeof buf,
                "mean IoU %.4f  area-weighted %.4f  (%zu/%zu truth matched)\n",
                report.mean_iou, report.area_weighted_iou, report.matches.size(),
                report.truth_count);
  os << buf;
  return os.str();
}

TimingReport timeline(std::vector<FrameTiming> frames) {
  TimingReport report;
  report.frames = std::move(frames);
  if (report.frames.empty()) return report;
  FrameTiming& m = report.mean;
  for (const FrameTiming& f : report.frames) {
    m.mapping_ms += f.mapping_ms;
    m.classify_ms += f.classify_ms;
    m.cluster_ms += f.cluster_ms;
    m.ransac_ms += f.ransac_ms;
    m.hull_ms += f.hull_ms;
    m.total_ms += f.total_ms;
    m.points += f.points;
    m.voxels += f.voxels;
    m.clusters += f.clusters;
  }
  const double n = static_cast<double>(report.frames.size());
  m.mapping_ms /= n;
  m.classify_ms /= n;
  m.cluster_ms /= n;
  m.ransac_ms /= n;
  m.hull_ms /= n;
  m.total_ms /= n;
  m.points = static_cast<std::size_t>(std::llround(m.points / n));
  m.voxels = static_cast<std::size_t>(std::llround(m.voxels / n));
  m.clusters = static_cast<std::size_t>(std::llround(m.clusters / n));
  return report;
}

void write_timing_csv(const std::string& path, const TimingReport& report) {
  std::ofstream os(path);
  if (!os) throw OutputError("timing csv: cannot open for write: " + path);
  os << "frame,points,voxels,clusters,mapping_ms,classify_ms,cluster_ms,ransac_ms,"
        "hull_ms,total_ms\n";
  char buf[256];
  const auto row = [&](const char* tag, const FrameTiming& f) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%.3f,%.3f,%.3f,%.3f,%.3f,%.3f\n", tag,
                  f.points, f.voxels, f.clusters, f.mapping_ms, f.classify_ms,
                  f.cluster_ms, f.ransac_ms, f.hull_ms, f.total_ms);
    os << buf;
  };
  for (const FrameTiming& f : report.frames) {
    char tag[24];
    std::snprintf(tag, sizeof tag, "%zu", f.frame);
    row(tag, f);
  }
  if (!report.frames.empty()) row("mean", report.mean);
}

}  // namespace voxplane
