#include <doctest.h>

#include <cmath>
#include <deque>
#include <set>

#include "test_support.hpp"
#include "voxplane/heightmap.hpp"

using namespace voxplane;

namespace {

HeightMap small_map() { return HeightMap(0.01, Eigen::Vector2i(120, 120), Vec2::Zero()); }

// test-side region oracle: BFS over a rasterized truth height field
struct RasterTruth {
  int nx, ny;
  std::vector<double> h;
  std::vector<bool> valid;
  double& at(int x, int y) { return h[x * ny + y]; }
};

std::vector<std::set<int>> grow_regions(const RasterTruth& t, double d_th) {
  std::vector<int> region(t.h.size(), -1);
  std::vector<std::set<int>> out;
  for (int x = 0; x < t.nx; ++x) {
    for (int y = 0; y < t.ny; ++y) {
      const int f = x * t.ny + y;
      if (!t.valid[f] || region[f] >= 0) continue;
      std::set<int> cells;
      std::deque<int> queue{f};
      region[f] = static_cast<int>(out.size());
      while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        cells.insert(cur);
        const int cx = cur / t.ny, cy = cur % t.ny;
        const int steps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& s : steps) {
          const int nx2 = cx + s[0], ny2 = cy + s[1];
          if (nx2 < 0 || ny2 < 0 || nx2 >= t.nx || ny2 >= t.ny) continue;
          const int nf = nx2 * t.ny + ny2;
          if (!t.valid[nf] || region[nf] >= 0) continue;
          if (std::abs(t.h[nf] - t.h[cur]) >= d_th) continue;
          region[nf] = region[f];
          queue.push_back(nf);
        }
      }
      out.push_back(std::move(cells));
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("heightmap") {

TEST_CASE("a point writes its height into its cell") {
  HeightMap hm = small_map();
  hm_integrate(hm, testsup::frame_of({Vec3(0.1, 0.1, 0.3)}));
  const auto idx = hm.world_to_index(Vec2(0.1, 0.1));
  REQUIRE(hm.in_bounds(idx));
  CHECK(hm.cell(idx).valid);
  CHECK(hm.cell(idx).height == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("latest measurement wins: the overhang failure mode") {
  HeightMap hm = small_map();
  hm_integrate(hm, testsup::frame_of({Vec3(0.05, 0.05, 0.0)}));
  hm_integrate(hm, testsup::frame_of({Vec3(0.05, 0.05, 0.5)}));
  const auto idx = hm.world_to_index(Vec2(0.05, 0.05));
  CHECK(hm.cell(idx).height == doctest::Approx(0.5));  // overhang overwrote the floor

  // same cell, same frame: last point in the stream wins
  hm_integrate(hm, testsup::frame_of({Vec3(0.05, 0.05, 0.2), Vec3(0.05, 0.05, 0.1)}));
  CHECK(hm.cell(idx).height == doctest::Approx(0.1));
}

TEST_CASE("empty frames and out-of-bounds points change nothing") {
  HeightMap hm = small_map();
  hm_integrate(hm, SensorFrame{});
  hm_integrate(hm, testsup::frame_of({Vec3(9.0, 9.0, 1.0)}));
  for (int x = 0; x < hm.extent().x(); ++x)
    for (int y = 0; y < hm.extent().y(); ++y)
      CHECK(!hm.cell(Eigen::Vector2i(x, y)).valid);
}

TEST_CASE("flat floor segments into one covering polygon") {
  HeightMap hm = small_map();
  std::vector<Vec3> pts;
  for (int x = 0; x < 120; ++x)
    for (int y = 0; y < 120; ++y)
      pts.emplace_back(-0.6 + 0.01 * (x + 0.5), -0.6 + 0.01 * (y + 0.5), 0.0);
  hm_integrate(hm, testsup::frame_of(pts));

  RansacParams ransac;
  ransac.seed = 3;
  const auto polys = hm_segment(hm, {}, ransac);
  REQUIRE(polys.size() == 1);
  CHECK(polys[0].area == doctest::Approx(1.2 * 1.2).epsilon(0.05));
  CHECK(polys[0].plane.normal.z() == doctest::Approx(1.0));
}

TEST_CASE("single stage map yields top plus ground excluding the occluded strip") {
  // rasterized truth: floor everywhere, platform height over the footprint
  HeightMap hm = small_map();
  RasterTruth truth{120, 120, std::vector<double>(120 * 120, 0.0),
                    std::vector<bool>(120 * 120, true)};
  std::vector<Vec3> pts;
  for (int x = 0; x < 120; ++x) {
    for (int y = 0; y < 120; ++y) {
      const double wx = -0.6 + 0.01 * (x + 0.5);
      const double wy = -0.6 + 0.01 * (y + 0.5);
      const bool on_stage = wx > 0.1 && wx < 0.5 && wy > -0.2 && wy < 0.2;
      const double z = on_stage ? 0.2 : 0.0;
      truth.at(x, y) = z;
      pts.emplace_back(wx, wy, z);
    }
  }
  hm_integrate(hm, testsup::frame_of(pts));

  const SegmentationParams seg;
  const auto oracle_regions = grow_regions(truth, seg.distance_th);
  REQUIRE(oracle_regions.size() == 2);  // ground ring + stage top

  RansacParams ransac;
  ransac.seed = 4;
  const auto polys = hm_segment(hm, seg, ransac);
  REQUIRE(polys.size() == 2);

  // region sizes from the oracle match the polygon inlier counts
  std::multiset<std::size_t> expected_sizes, got_sizes;
  for (const auto& r : oracle_regions) expected_sizes.insert(r.size());
  for (const auto& p : polys) got_sizes.insert(static_cast<std::size_t>(p.plane.inlier_count));
  CHECK(expected_sizes == got_sizes);

  // exactly one plane near z = 0.2 (the top), one near z = 0
  const bool first_is_top = polys[0].plane.offset > 0.1;
  const PlanePolygon& top = first_is_top ? polys[0] : polys[1];
  const PlanePolygon& ground = first_is_top ? polys[1] : polys[0];
  CHECK(top.plane.offset == doctest::Approx(0.2).epsilon(0.05));
  CHECK(ground.plane.offset == doctest::Approx(0.0).epsilon(0.05));
  CHECK(top.area == doctest::Approx(0.4 * 0.4).epsilon(0.1));
}

TEST_CASE("overhang replaces floor cells beneath it; floor polygon shrinks") {
  // the slab footprint sits at the +x end of the floor, so the surviving
  // floor region is a rectangle strictly smaller than the full floor
  HeightMap hm = small_map();
  std::vector<Vec3> floor_pts, slab_pts;
  for (int x = 0; x < 120; ++x) {
    for (int y = 0; y < 120; ++y) {
      const double wx = -0.6 + 0.01 * (x + 0.5);
      const double wy = -0.6 + 0.01 * (y + 0.5);
      floor_pts.emplace_back(wx, wy, 0.0);
      if (wx > 0.2) slab_pts.emplace_back(wx, wy, 0.5);  // full-width strip
    }
  }
  hm_integrate(hm, testsup::frame_of(floor_pts));
  hm_integrate(hm, testsup::frame_of(slab_pts));  // underside arrives last

  RansacParams ransac;
  ransac.seed = 5;
  const auto polys = hm_segment(hm, {}, ransac);
  REQUIRE(polys.size() >= 2);

  double floor_area = 0.0, full_floor = 1.2 * 1.2;
  int slab_planes = 0;
  for (const auto& p : polys) {
    if (p.plane.offset > 0.25) ++slab_planes;
    else floor_area = std::max(floor_area, p.area);
  }
  CHECK(slab_planes == 1);
  CHECK(floor_area < 0.9 * full_floor);  // strictly smaller than the truth floor
}

}  // TEST_SUITE
