#pragma once

#include <span>
#include <string>
#include <vector>

#include "bf/core/types.hpp"
#include "bf/db/behavior_db.hpp"

namespace bf::raster {

struct Pixel {
  int x = 0;  // column
  int y = 0;  // row
  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// Axis-aligned BEV grid. Pixel (i, j) covers the half-open square
// [origin.x + i*res, origin.x + (i+1)*res) x [origin.y + j*res, ...).
struct Grid {
  int h = 64;
  int w = 64;
  double resolution = 0.5;      // meters per pixel
  core::Point origin;           // corner of pixel (0, 0)

  static Grid centered_on(const core::Point& center, int h = 64, int w = 64,
                          double resolution = 0.5) {
    Grid g{h, w, resolution,
           {center.x - 0.5 * resolution * w, center.y - 0.5 * resolution * h}};
    return g;
  }

  bool valid() const { return h >= 1 && w >= 1 && resolution > 0.0; }
  bool contains(const Pixel& p) const { return p.x >= 0 && p.x < w && p.y >= 0 && p.y < h; }
  Pixel pixel_of(const core::Point& p) const {
    return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
            static_cast<int>(std::floor((p.y - origin.y) / resolution))};
  }
  bool contains_point(const core::Point& p) const { return contains(pixel_of(p)); }
  friend bool operator==(const Grid&, const Grid&) = default;
};

// All grid pixels whose (half-open) square the continuous polyline passes
// through, each listed once. Sorted by (y, x). Segments outside the grid
// contribute nothing; a zero-length polyline inside pixel (i,j) yields {(i,j)}.
std::vector<Pixel> rasterize_polyline(std::span<const core::Point> points, const Grid& grid);

struct BehaviorProbMap {
  Grid grid;
  std::vector<double> values;  // h*w, row-major (y * w + x)

  double at(int x, int y) const { return values[static_cast<size_t>(y) * grid.w + x]; }
  std::string to_csv() const;
  std::string to_pgm() const;  // P2 grayscale, for eyeballing
};

// Coverage counts (at most one increment per trajectory per pixel),
// normalized by the maximum pixel value; all-zero when nothing rendered.
BehaviorProbMap render_behavior_prob_map(const db::BehaviorSet& behaviors, const Grid& grid);

struct TargetOutsideGrid : std::runtime_error {
  explicit TargetOutsideGrid(const std::string& what) : std::runtime_error(what) {}
};

// Binary occupancy channels sharing one grid: lane coverage, one channel per
// observed timestep of agent positions, and a single-pixel target marker.
struct SceneImage {
  Grid grid;
  std::vector<double> lane_channel;                 // h*w of {0,1}
  std::vector<std::vector<double>> agent_channels;  // t_obs channels of {0,1}
  std::vector<double> target_channel;               // h*w, exactly one 1
};

SceneImage render_scene_image(const core::Scene& scene, const std::string& target_agent,
                              const Grid& grid, const core::LaneMap& map);

}  // namespace bf::raster
