#pragma once

#include <chrono>
#include <span>
#include <string>
#include <vector>

#include "voxplane/polygonize.hpp"

namespace voxplane {

/// Plane-level IoU of a detected polygon against a truth polygon, measured
/// in the truth plane's frame. Both polygons are rasterized at raster_res
/// onto the truth plane; 0 when the normals differ by more than 20 degrees
/// or either polygon is degenerate.
double plane_iou(const PlanePolygon& detected, const PlanePolygon& truth,
                 double raster_res = 0.005);

/// Exact convex-clipping IoU (Sutherland-Hodgman), same frame and normal
/// gate as plane_iou. Cross-check path for the rasterized default.
double plane_iou_exact(const PlanePolygon& detected, const PlanePolygon& truth);

struct PlaneMatch {
  int detected_id = -1;
  int truth_id = -1;
  double iou = 0.0;
};

struct IoUReport {
  std::vector<PlaneMatch> matches;   // truth id ascending
  std::size_t truth_count = 0;
  std::size_t detected_count = 0;
  std::size_t unmatched_truth = 0;
  std::size_t unmatched_detected = 0;
  double mean_iou = 0.0;           // over truth planes, unmatched scoring 0
  double area_weighted_iou = 0.0;  // weighted by truth polygon area
};

/// Greedy one-to-one matching by descending IoU (ties: lower truth id, then
/// lower detected id). Pairs with zero IoU never match.
IoUReport match_planes(std::span<const PlanePolygon> detected,
                       std::span<const PlanePolygon> truth);

/// Machine-readable key/value serialization, stable field order.
void write_iou_report(const std::string& path, const IoUReport& report);
IoUReport read_iou_report(const std::string& path);

/// Human-readable table.
std::string format_iou_table(const IoUReport& report);

struct FrameTiming {
  std::size_t frame = 0;
  double mapping_ms = 0.0;   // clear + integrate + recenter
  double classify_ms = 0.0;  // normals + steppability
  double cluster_ms = 0.0;   // adjacency + CCL
  double ransac_ms = 0.0;
  double hull_ms = 0.0;
  double total_ms = 0.0;
  std::size_t points = 0;
  std::size_t voxels = 0;  // occupied after integration
  std::size_t clusters = 0;
};

struct TimingReport {
  std::vector<FrameTiming> frames;
  FrameTiming mean;  // stage means over frames; counts averaged too
};

/// Aggregate per-frame stage spans into a report with per-stage means.
TimingReport timeline(std::vector<FrameTiming> frames);

/// One CSV row per frame plus a trailing mean row.
void write_timing_csv(const std::string& path, const TimingReport& report);

/// Wall-clock stage stopwatch (monotonic).
class StageTimer {
 public:
  void start() { t0_ = std::chrono::steady_clock::now(); }
  /// Milliseconds since start().
  double stop_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace voxplane
