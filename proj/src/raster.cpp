#include "bf/raster/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bf/util/csv.hpp"

namespace bf::raster {

namespace {

// Appends every cell the segment passes through, in grid units, using a
// boundary-crossing walk. Cells are half-open, so a point exactly on a
// boundary belongs to the upper cell; crossing a corner steps diagonally.
void trace_segment(double ax, double ay, double bx, double by, std::vector<Pixel>& out) {
  int64_t cx = static_cast<int64_t>(std::floor(ax));
  int64_t cy = static_cast<int64_t>(std::floor(ay));
  out.push_back({static_cast<int>(cx), static_cast<int>(cy)});

  const double dx = bx - ax;
  const double dy = by - ay;
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  double t_max_x = kInf, t_delta_x = kInf;
  if (sx > 0) {
    t_max_x = (static_cast<double>(cx + 1) - ax) / dx;
    t_delta_x = 1.0 / dx;
  } else if (sx < 0) {
    t_max_x = (static_cast<double>(cx) - ax) / dx;
    t_delta_x = -1.0 / dx;
  }
  double t_max_y = kInf, t_delta_y = kInf;
  if (sy > 0) {
    t_max_y = (static_cast<double>(cy + 1) - ay) / dy;
    t_delta_y = 1.0 / dy;
  } else if (sy < 0) {
    t_max_y = (static_cast<double>(cy) - ay) / dy;
    t_delta_y = -1.0 / dy;
  }

  const int64_t guard = std::llabs(static_cast<int64_t>(std::floor(bx)) - cx) +
                        std::llabs(static_cast<int64_t>(std::floor(by)) - cy) + 8;
  for (int64_t steps = 0; steps < guard; ++steps) {
    const double t_next = std::min(t_max_x, t_max_y);
    if (t_next > 1.0) break;
    if (t_max_x < t_max_y) {
      cx += sx;
      t_max_x += t_delta_x;
    } else if (t_max_y < t_max_x) {
      cy += sy;
      t_max_y += t_delta_y;
    } else {
      cx += sx;
      cy += sy;
      t_max_x += t_delta_x;
      t_max_y += t_delta_y;
    }
    out.push_back({static_cast<int>(cx), static_cast<int>(cy)});
  }
}

}  // namespace

std::vector<Pixel> rasterize_polyline(std::span<const core::Point> points, const Grid& grid) {
  if (!grid.valid()) throw std::invalid_argument("invalid grid");
  if (points.size() < 2) throw std::invalid_argument("polyline needs at least 2 points");

  std::vector<Pixel> visited;
  const double inv = 1.0 / grid.resolution;
  for (size_t i = 1; i < points.size(); ++i) {
    trace_segment((points[i - 1].x - grid.origin.x) * inv,
                  (points[i - 1].y - grid.origin.y) * inv,
                  (points[i].x - grid.origin.x) * inv,
                  (points[i].y - grid.origin.y) * inv, visited);
  }
  std::vector<Pixel> out;
  out.reserve(visited.size());
  for (const Pixel& p : visited)
    if (grid.contains(p)) out.push_back(p);
  std::sort(out.begin(), out.end(), [](const Pixel& a, const Pixel& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BehaviorProbMap render_behavior_prob_map(const db::BehaviorSet& behaviors, const Grid& grid) {
  if (!grid.valid()) throw std::invalid_argument("invalid grid");
  BehaviorProbMap map;
  map.grid = grid;
  map.values.assign(static_cast<size_t>(grid.h) * grid.w, 0.0);
  for (const core::Trajectory* traj : behaviors.members) {
    for (const Pixel& p : rasterize_polyline(traj->points, grid))
      map.values[static_cast<size_t>(p.y) * grid.w + p.x] += 1.0;
  }
  const double max_count = *std::max_element(map.values.begin(), map.values.end());
  if (max_count > 0.0)
    for (double& v : map.values) v /= max_count;
  return map;
}

std::string BehaviorProbMap::to_csv() const {
  std::string out;
  for (int y = 0; y < grid.h; ++y) {
    for (int x = 0; x < grid.w; ++x) {
      if (x) out += ',';
      out += util::format_double(at(x, y));
    }
    out += '\n';
  }
  return out;
}

std::string BehaviorProbMap::to_pgm() const {
  std::string out = "P2\n" + std::to_string(grid.w) + " " + std::to_string(grid.h) + "\n255\n";
  for (int y = grid.h - 1; y >= 0; --y) {  // north-up
    for (int x = 0; x < grid.w; ++x) {
      if (x) out += ' ';
      out += std::to_string(static_cast<int>(std::lround(at(x, y) * 255.0)));
    }
    out += '\n';
  }
  return out;
}

SceneImage render_scene_image(const core::Scene& scene, const std::string& target_agent,
                              const Grid& grid, const core::LaneMap& map) {
  if (!grid.valid()) throw std::invalid_argument("invalid grid");
  const core::AgentTrack* target = scene.find_agent(target_agent);
  if (!target) throw std::invalid_argument("target agent not in scene: " + target_agent);

  SceneImage img;
  img.grid = grid;
  const size_t n = static_cast<size_t>(grid.h) * grid.w;
  img.lane_channel.assign(n, 0.0);
  for (const core::LaneSegmentDef& lane : map.lanes)
    for (const Pixel& p : rasterize_polyline(lane.polyline, grid))
      img.lane_channel[static_cast<size_t>(p.y) * grid.w + p.x] = 1.0;

  const int t_obs = static_cast<int>(target->observed.points.size());
  img.agent_channels.assign(t_obs, std::vector<double>(n, 0.0));
  for (const core::AgentTrack& agent : scene.agents) {
    for (int t = 0; t < t_obs && t < static_cast<int>(agent.observed.points.size()); ++t) {
      const Pixel p = grid.pixel_of(agent.observed.points[t]);
      if (grid.contains(p))
        img.agent_channels[t][static_cast<size_t>(p.y) * grid.w + p.x] = 1.0;
    }
  }

  img.target_channel.assign(n, 0.0);
  const Pixel tp = grid.pixel_of(core::current_location(target->observed));
  if (!grid.contains(tp))
    throw TargetOutsideGrid("target agent current location is outside the grid");
  img.target_channel[static_cast<size_t>(tp.y) * grid.w + tp.x] = 1.0;
  return img;
}

}  // namespace bf::raster
