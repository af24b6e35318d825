#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bf/util/config.hpp"

namespace bf::core {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double squared_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

enum class TrajKind { kObserved, kFuture };

// A timestamped 2-D polyline in the global metric frame. Observed
// trajectories carry exactly t_obs points, future ones exactly t_fut;
// the lengths live in ExperimentConfig and are validated at load time.
struct Trajectory {
  std::string scene_id;
  std::string agent_id;
  std::string region_id;
  std::vector<Point> points;
  double sample_period = 0.5;
  TrajKind kind = TrajKind::kObserved;

  // Total polyline length in meters.
  double path_length() const {
    double len = 0.0;
    for (size_t i = 1; i < points.size(); ++i) len += distance(points[i - 1], points[i]);
    return len;
  }

  // Path length over elapsed time; the construction filter compares this
  // against the 2 m/s threshold.
  double mean_speed() const {
    if (points.size() < 2) return 0.0;
    const double elapsed = static_cast<double>(points.size() - 1) * sample_period;
    return elapsed > 0.0 ? path_length() / elapsed : 0.0;
  }
};

// Location at the last observed timestamp.
inline Point current_location(const Trajectory& traj) {
  if (traj.kind != TrajKind::kObserved)
    throw std::invalid_argument("current_location requires an observed trajectory");
  if (traj.points.empty())
    throw std::invalid_argument("current_location on empty trajectory");
  return traj.points.back();
}

// Location at the first timestamp.
inline Point first_location(const Trajectory& traj) {
  if (traj.points.empty())
    throw std::invalid_argument("first_location on empty trajectory");
  return traj.points.front();
}

struct AgentTrack {
  std::string agent_id;
  Trajectory observed;
  Trajectory future;
};

struct Scene {
  std::string scene_id;
  std::string region_id;
  std::string map_ref;
  std::vector<AgentTrack> agents;  // sorted by agent_id
  std::vector<std::string> target_agent_ids;

  const AgentTrack* find_agent(const std::string& agent_id) const {
    for (const auto& a : agents)
      if (a.agent_id == agent_id) return &a;
    return nullptr;
  }
};

struct SceneSet {
  std::vector<Scene> scenes;  // sorted by scene_id
};

struct LaneSegmentDef {
  std::string lane_id;
  std::vector<Point> polyline;             // >= 2 points
  std::vector<std::string> successors;     // lane ids, must resolve
};

struct LaneMap {
  std::vector<LaneSegmentDef> lanes;  // sorted by lane_id

  const LaneSegmentDef* find(const std::string& lane_id) const {
    for (const auto& l : lanes)
      if (l.lane_id == lane_id) return &l;
    return nullptr;
  }
};

struct ExperimentConfig {
  int t_obs = 5;             // observed steps
  int t_fut = 12;            // future steps
  double sample_period = 0.5;
  double epsilon = 4.0;      // behavior query radius, meters
  int n_modes = 6;           // K
  int feature_dim = 64;      // C
  int behavior_cap = 16;     // N_B_max
  double lambda_kd = 1.5;
  int kd_sites = 2;          // 1 = fused behavior site, 2 = + final scene site
  uint64_t seed = 1;

  void validate() const {
    if (t_obs <= 0 || t_fut <= 0) throw std::invalid_argument("t_obs/t_fut must be positive");
    if (sample_period <= 0.0) throw std::invalid_argument("sample_period must be positive");
    if (epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    if (n_modes <= 0 || feature_dim <= 0) throw std::invalid_argument("n_modes/feature_dim must be positive");
    if (behavior_cap < 0) throw std::invalid_argument("behavior_cap must be non-negative");
    if (lambda_kd < 0.0) throw std::invalid_argument("lambda_kd must be non-negative");
    if (kd_sites != 1 && kd_sites != 2) throw std::invalid_argument("kd_sites must be 1 or 2");
  }

  static ExperimentConfig from_config(const util::KeyValueConfig& kv) {
    ExperimentConfig c;
    c.t_obs = static_cast<int>(kv.get_int("t_obs", c.t_obs));
    c.t_fut = static_cast<int>(kv.get_int("t_fut", c.t_fut));
    c.sample_period = kv.get_double("sample_period", c.sample_period);
    c.epsilon = kv.get_double("epsilon", c.epsilon);
    c.n_modes = static_cast<int>(kv.get_int("n_modes", c.n_modes));
    c.feature_dim = static_cast<int>(kv.get_int("feature_dim", c.feature_dim));
    c.behavior_cap = static_cast<int>(kv.get_int("behavior_cap", c.behavior_cap));
    c.lambda_kd = kv.get_double("lambda_kd", c.lambda_kd);
    c.kd_sites = static_cast<int>(kv.get_int("kd_sites", c.kd_sites));
    c.seed = static_cast<uint64_t>(kv.get_int("seed", static_cast<long long>(c.seed)));
    c.validate();
    return c;
  }

  void to_config(util::KeyValueConfig& kv) const;
};

// Error types for the data layer.

struct MalformedRow : std::runtime_error {
  int line;
  explicit MalformedRow(int line_no, const std::string& what)
      : std::runtime_error("malformed row at line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

struct LengthMismatch : std::runtime_error {
  std::string scene_id, agent_id;
  LengthMismatch(std::string scene, std::string agent, const std::string& what)
      : std::runtime_error("length mismatch for scene " + scene + " agent " + agent + ": " + what),
        scene_id(std::move(scene)),
        agent_id(std::move(agent)) {}
};

struct IoFailure : std::runtime_error {
  explicit IoFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bf::core
