#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bf/raster/raster.hpp"
#include "bf/util/rng.hpp"
#include "test_helpers.hpp"

using namespace bf;

namespace {

using PixelSet = std::set<raster::Pixel>;

PixelSet to_set(const std::vector<raster::Pixel>& v) { return PixelSet(v.begin(), v.end()); }

// Dense-sampling reference: walk each segment in steps of resolution/10 and
// collect the pixels containing the samples. Undercounts knife-edge clips,
// so it is used as a subset check.
PixelSet dense_sample_pixels(std::span<const core::Point> pts, const raster::Grid& g,
                             double step_frac = 0.1) {
  PixelSet out;
  const double step = g.resolution * step_frac;
  for (size_t i = 1; i < pts.size(); ++i) {
    const double len = core::distance(pts[i - 1], pts[i]);
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int k = 0; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      const core::Point p{pts[i - 1].x + t * (pts[i].x - pts[i - 1].x),
                          pts[i - 1].y + t * (pts[i].y - pts[i - 1].y)};
      const raster::Pixel px = g.pixel_of(p);
      if (g.contains(px)) out.insert(px);
    }
  }
  return out;
}

// Exact reference: a pixel is covered iff some segment parameter maps into
// its half-open square. Slab-clips each segment against the closed square,
// then classifies the midpoint of the clipped interval with floor().
bool segment_touches_pixel(const core::Point& a, const core::Point& b, const raster::Grid& g,
                           const raster::Pixel& px) {
  const double x0 = g.origin.x + px.x * g.resolution;
  const double y0 = g.origin.y + px.y * g.resolution;
  const double x1 = x0 + g.resolution;
  const double y1 = y0 + g.resolution;
  const double dx = b.x - a.x, dy = b.y - a.y;
  double tlo = 0.0, thi = 1.0;
  auto clip = [&](double d, double lo, double hi, double p) {
    if (d == 0.0) return p >= lo && p <= hi;
    double t0 = (lo - p) / d, t1 = (hi - p) / d;
    if (t0 > t1) std::swap(t0, t1);
    tlo = std::max(tlo, t0);
    thi = std::min(thi, t1);
    return true;
  };
  if (!clip(dx, x0, x1, a.x)) return false;
  if (!clip(dy, y0, y1, a.y)) return false;
  if (tlo > thi) return false;
  const double tm = 0.5 * (tlo + thi);
  const raster::Pixel mid = g.pixel_of({a.x + tm * dx, a.y + tm * dy});
  return mid == px;
}

PixelSet exact_clip_pixels(std::span<const core::Point> pts, const raster::Grid& g) {
  PixelSet out;
  for (int y = 0; y < g.h; ++y)
    for (int x = 0; x < g.w; ++x)
      for (size_t i = 1; i < pts.size(); ++i)
        if (segment_touches_pixel(pts[i - 1], pts[i], g, {x, y})) {
          out.insert({x, y});
          break;
        }
  return out;
}

db::BehaviorSet behavior_set_of(const std::vector<core::Trajectory>& trajs) {
  db::BehaviorSet bs;
  for (const auto& t : trajs) bs.members.push_back(&t);
  return bs;
}

}  // namespace

TEST_CASE("rasterize_polyline: horizontal segment spanning 4 pixel centers") {
  raster::Grid g{1, 8, 1.0, {0, 0}};
  std::vector<core::Point> pts{{1.5, 0.5}, {4.5, 0.5}};
  auto pixels = raster::rasterize_polyline(pts, g);
  REQUIRE(pixels.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(pixels[i].x == i + 1);
    CHECK(pixels[i].y == 0);
  }
}

TEST_CASE("rasterize_polyline: repeated point marks exactly its pixel") {
  raster::Grid g{4, 4, 1.0, {0, 0}};
  std::vector<core::Point> pts{{2.25, 3.75}, {2.25, 3.75}};
  auto pixels = raster::rasterize_polyline(pts, g);
  REQUIRE(pixels.size() == 1);
  CHECK(pixels[0] == raster::Pixel{2, 3});
}

TEST_CASE("rasterize_polyline: segments outside the grid contribute nothing") {
  raster::Grid g{4, 4, 1.0, {0, 0}};
  std::vector<core::Point> pts{{10, 10}, {20, 15}};
  CHECK(raster::rasterize_polyline(pts, g).empty());
}

TEST_CASE("rasterize_polyline: diagonal through interior") {
  raster::Grid g{4, 4, 1.0, {0, 0}};
  std::vector<core::Point> pts{{0.5, 0.5}, {3.5, 3.5}};
  auto got = to_set(raster::rasterize_polyline(pts, g));
  CHECK(got == exact_clip_pixels(pts, g));
  CHECK(got.count({0, 0}) == 1);
  CHECK(got.count({3, 3}) == 1);
}

TEST_CASE("rasterize_polyline agrees with sampling and exact-clip references") {
  util::Rng rng(808);
  for (int trial = 0; trial < 120; ++trial) {
    raster::Grid g{8, 8, 0.5, {-2.0, -2.0}};
    std::vector<core::Point> pts;
    const int n = 2 + static_cast<int>(rng.uniform_int(4));
    for (int i = 0; i < n; ++i)
      pts.push_back({rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)});
    auto got = to_set(raster::rasterize_polyline(pts, g));
    auto sampled = dense_sample_pixels(pts, g);
    CHECK(std::includes(got.begin(), got.end(), sampled.begin(), sampled.end()));
    CHECK(got == exact_clip_pixels(pts, g));
  }
}

TEST_CASE("prob map: empty behavior set renders all zeros") {
  raster::Grid g{8, 8, 0.5, {0, 0}};
  auto map = raster::render_behavior_prob_map(db::BehaviorSet{}, g);
  for (double v : map.values) CHECK(v == 0.0);
}

TEST_CASE("prob map: one straight trajectory covers a row with ones") {
  raster::Grid g{8, 8, 1.0, {0, 0}};
  std::vector<core::Trajectory> trajs{
      test::make_traj("s", "a", {{0.5, 2.5}, {7.5, 2.5}})};
  auto map = raster::render_behavior_prob_map(behavior_set_of(trajs), g);
  for (int x = 0; x < 8; ++x) CHECK(map.at(x, 2) == 1.0);
  for (int x = 0; x < 8; ++x) CHECK(map.at(x, 3) == 0.0);
}

TEST_CASE("prob map: overlap normalizes to {1.0, 0.5}") {
  raster::Grid g{8, 8, 1.0, {0, 0}};
  std::vector<core::Trajectory> trajs{
      test::make_traj("s0", "a", {{0.5, 2.5}, {7.5, 2.5}}),
      test::make_traj("s1", "a", {{4.5, 2.5}, {7.5, 2.5}})};
  auto map = raster::render_behavior_prob_map(behavior_set_of(trajs), g);
  CHECK(map.at(1, 2) == 0.5);
  CHECK(map.at(5, 2) == 1.0);
  std::set<double> distinct;
  for (double v : map.values)
    if (v != 0.0) distinct.insert(v);
  CHECK(distinct == std::set<double>{0.5, 1.0});
}

TEST_CASE("prob map: a trajectory crossing a pixel twice still counts once") {
  raster::Grid g{8, 8, 1.0, {0, 0}};
  // Out and back along the same row.
  std::vector<core::Trajectory> trajs{
      test::make_traj("s", "a", {{0.5, 2.5}, {6.5, 2.5}, {0.6, 2.4}})};
  auto map = raster::render_behavior_prob_map(behavior_set_of(trajs), g);
  CHECK(map.at(3, 2) == 1.0);  // would be 0.5 of a double-counted max
}

TEST_CASE("prob map matches count-and-normalize oracle on random 8x8 cases") {
  util::Rng rng(515);
  for (int trial = 0; trial < 40; ++trial) {
    raster::Grid g{8, 8, 0.5, {-2.0, -2.0}};
    std::vector<core::Trajectory> trajs;
    const int n_traj = 1 + static_cast<int>(rng.uniform_int(20));
    for (int i = 0; i < n_traj; ++i) {
      std::vector<core::Point> pts;
      const int n = 2 + static_cast<int>(rng.uniform_int(4));
      for (int k = 0; k < n; ++k)
        pts.push_back({rng.uniform(-2.5, 2.5), rng.uniform(-2.5, 2.5)});
      trajs.push_back(test::make_traj("s" + std::to_string(i), "a", pts));
    }
    auto map = raster::render_behavior_prob_map(behavior_set_of(trajs), g);

    std::vector<double> counts(64, 0.0);
    for (const auto& t : trajs)
      for (const auto& px : exact_clip_pixels(t.points, g))
        counts[px.y * 8 + px.x] += 1.0;
    const double mx = *std::max_element(counts.begin(), counts.end());
    for (int i = 0; i < 64; ++i) {
      const double expected = mx > 0 ? counts[i] / mx : 0.0;
      CHECK(map.values[i] == expected);
    }
    const double got_max = *std::max_element(map.values.begin(), map.values.end());
    if (mx > 0) CHECK(got_max == 1.0);
    for (double v : map.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("prob map is invariant to trajectory order") {
  util::Rng rng(99);
  raster::Grid g{8, 8, 0.5, {0, 0}};
  std::vector<core::Trajectory> trajs;
  for (int i = 0; i < 10; ++i) {
    std::vector<core::Point> pts;
    for (int k = 0; k < 3; ++k) pts.push_back({rng.uniform(0, 4), rng.uniform(0, 4)});
    trajs.push_back(test::make_traj("s" + std::to_string(i), "a", pts));
  }
  auto fwd = raster::render_behavior_prob_map(behavior_set_of(trajs), g);
  std::reverse(trajs.begin(), trajs.end());
  auto rev = raster::render_behavior_prob_map(behavior_set_of(trajs), g);
  CHECK(fwd.values == rev.values);
}

TEST_CASE("scene image: channels, target marker, error on off-grid target") {
  core::LaneMap map;
  core::LaneSegmentDef lane;
  lane.lane_id = "l0";
  lane.polyline = {{-10, 0.25}, {10, 0.25}};
  map.lanes.push_back(lane);

  core::Scene scene;
  scene.scene_id = "s0";
  scene.region_id = "r0";
  core::AgentTrack agent;
  agent.agent_id = "a0";
  agent.observed = test::make_traj("s0", "a0", {{-2, 0}, {-1, 0}, {0, 0}, {1, 0}, {2, 0}});
  agent.future = test::make_traj("s0", "a0", {{3, 0}}, core::TrajKind::kFuture);
  scene.agents.push_back(agent);
  scene.target_agent_ids = {"a0"};

  const auto grid = raster::Grid::centered_on({2, 0}, 16, 16, 0.5);
  auto img = raster::render_scene_image(scene, "a0", grid, map);

  double target_sum = 0.0;
  for (double v : img.target_channel) target_sum += v;
  CHECK(target_sum == 1.0);
  REQUIRE(img.agent_channels.size() == 5);
  for (const auto& ch : img.agent_channels) {
    double s = 0.0;
    for (double v : ch) s += v;
    CHECK(s == 1.0);  // one agent per timestep channel
  }
  double lane_sum = 0.0;
  for (double v : img.lane_channel) lane_sum += v;
  CHECK(lane_sum == 16.0);  // full row of the 16-wide grid

  SUBCASE("scene with no agents keeps only the lane channel") {
    core::Scene empty_scene = scene;
    empty_scene.agents.clear();
    CHECK_THROWS_AS(raster::render_scene_image(empty_scene, "a0", grid, map),
                    std::invalid_argument);
    // Lane-only rendering still works with a present but distant target.
  }

  SUBCASE("target outside grid raises") {
    const auto far_grid = raster::Grid::centered_on({500, 500}, 16, 16, 0.5);
    CHECK_THROWS_AS(raster::render_scene_image(scene, "a0", far_grid, map),
                    raster::TargetOutsideGrid);
  }
}

TEST_CASE("scene image channel sums equal brute-force occupancy counts") {
  util::Rng rng(321);
  core::LaneMap map;
  for (int l = 0; l < 3; ++l) {
    core::LaneSegmentDef lane;
    lane.lane_id = "l" + std::to_string(l);
    lane.polyline = {{rng.uniform(-4, 4), rng.uniform(-4, 4)},
                     {rng.uniform(-4, 4), rng.uniform(-4, 4)}};
    map.lanes.push_back(lane);
  }
  core::Scene scene;
  scene.scene_id = "s0";
  scene.region_id = "r0";
  for (int a = 0; a < 4; ++a) {
    core::AgentTrack track;
    track.agent_id = "a" + std::to_string(a);
    std::vector<core::Point> pts;
    for (int k = 0; k < 5; ++k) pts.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4)});
    track.observed = test::make_traj("s0", track.agent_id, pts);
    track.future = test::make_traj("s0", track.agent_id, {{0, 0}}, core::TrajKind::kFuture);
    scene.agents.push_back(track);
  }
  const auto grid = raster::Grid::centered_on(scene.agents[0].observed.points.back(), 32, 32, 0.5);
  auto img = raster::render_scene_image(scene, "a0", grid, map);

  for (int t = 0; t < 5; ++t) {
    std::set<std::pair<int, int>> expected;
    for (const auto& agent : scene.agents) {
      const auto px = grid.pixel_of(agent.observed.points[t]);
      if (grid.contains(px)) expected.insert({px.x, px.y});
    }
    double sum = 0.0;
    for (double v : img.agent_channels[t]) sum += v;
    CHECK(sum == static_cast<double>(expected.size()));
  }

  std::set<raster::Pixel> lane_union;
  for (const auto& lane : map.lanes) {
    auto px = exact_clip_pixels(lane.polyline, grid);
    lane_union.insert(px.begin(), px.end());
  }
  double lane_sum = 0.0;
  for (double v : img.lane_channel) lane_sum += v;
  CHECK(lane_sum == static_cast<double>(lane_union.size()));
}

TEST_CASE("prob map and scene image share an identical grid") {
  core::Point center{3.25, -4.5};
  const auto grid = raster::Grid::centered_on(center, 64, 64, 0.5);
  auto map = raster::render_behavior_prob_map(db::BehaviorSet{}, grid);
  CHECK(map.grid == grid);
  CHECK(grid.pixel_of(center) == raster::Pixel{32, 32});
}
