#pragma once

#include <array>
#include <string>
#include <vector>

#include "bf/core/types.hpp"
#include "bf/db/behavior_db.hpp"
#include "bf/util/config.hpp"

namespace bf::synth {

enum class Turn { kLeft = 0, kStraight = 1, kRight = 2 };
enum class Split { kTrain = 0, kVal = 1, kTest = 2 };

const char* split_name(Split s);

// Synthetic-world parameters. Turn priors are location-specific and are
// deliberately not encoded in the map geometry: a map-only model cannot
// recover them, while local behavior data can.
struct WorldSpec {
  int grid_n = 3;
  double lane_spacing = 24.0;
  // Optional explicit per-intersection priors over {left, straight, right};
  // empty means "derive from the seed". Size must be grid_n * grid_n.
  std::vector<std::array<double, 3>> turn_priors;
  double speed_min = 2.5;  // >= 2.5 so every agent passes the 2 m/s filter
  double speed_max = 8.0;
  double lateral_noise_sd = 0.15;
  int n_train = 800;
  int n_val = 200;
  int n_test = 300;
  int agents_min = 2;
  int agents_max = 8;
  int t_obs = 5;
  int t_fut = 12;
  double sample_period = 0.5;
  uint64_t seed = 7;
  std::string region_id = "w0";

  int n_scenes(Split s) const {
    switch (s) {
      case Split::kTrain: return n_train;
      case Split::kVal: return n_val;
      default: return n_test;
    }
  }

  void validate() const;
  static WorldSpec from_config(const util::KeyValueConfig& kv);
  void to_config(util::KeyValueConfig& kv) const;
};

// Grid world: intersections joined by straight two-point link lanes, with
// left/straight/right connector lanes through each intersection box.
// Boundary intersections get stub links so every approach looks alike.
struct World {
  WorldSpec spec;
  core::LaneMap lane_map;
  std::vector<std::array<double, 3>> turn_priors;  // per intersection, ground truth
  std::vector<double> popularity;                  // per intersection, sums to 1

  struct LaneMeta {
    enum class Role { kLink, kConnector } role = Role::kLink;
    int to_intersection = -1;   // links: arrival intersection, -1 for outbound stubs
    int at_intersection = -1;   // connectors
    int dir = -1;               // links: travel dir; connectors: entry dir (0=E,1=N,2=W,3=S)
    int turn = -1;              // connectors only
    std::array<int, 3> succ_by_turn{-1, -1, -1};  // links: connector per turn
    int succ = -1;              // connectors: exit link
    double length = 0.0;
  };
  std::vector<LaneMeta> meta;  // parallel to lane_map.lanes

  int intersections() const { return spec.grid_n * spec.grid_n; }
  core::Point intersection_center(int idx) const;
  int inbound_link(int intersection, int dir) const;
  int outbound_link(int intersection, int dir) const;
  int connector(int intersection, int dir, Turn t) const;

  static constexpr double kBoxRadius = 6.0;   // intersection half-extent
  static constexpr double kLaneOffset = 1.75; // right-hand lane offset

 private:
  friend World generate_world(const WorldSpec&, uint64_t);
  std::vector<std::array<int, 4>> inbound_;
  std::vector<std::array<int, 4>> outbound_;
  std::vector<std::array<std::array<int, 3>, 4>> connector_;
};

// Deterministic in (spec, seed); the seed only shapes priors and popularity.
World generate_world(const WorldSpec& spec, uint64_t seed);

struct TurnEvent {
  std::string scene_id;
  std::string agent_id;
  int intersection = -1;
  Turn turn = Turn::kStraight;
};

struct SimResult {
  core::SceneSet scenes;
  std::vector<TurnEvent> turns;  // every sampled intersection crossing
};

// Spawns agents around popularity-weighted intersections, samples one turn
// per crossed intersection from that intersection's prior, follows the lane
// centerline at constant speed with lateral Gaussian noise, and slices each
// agent into t_obs observed + t_fut future points. Scene agent "a00" is the
// prediction target. Splits use disjoint seed streams.
SimResult simulate_agents(const World& world, const WorldSpec& spec, Split split,
                          uint64_t seed);

struct Benchmark {
  World world;
  core::SceneSet train, val, test;
  db::BehaviorDatabase db_train, db_val, db_test;
};

// Three scene sets plus three behavior databases, each database built only
// from its own split's observed trajectories.
Benchmark make_benchmark(const WorldSpec& spec, double cell_size = 2.0);

// world.json round-trip (spec + resolved priors + popularity).
std::string world_to_json(const World& world);
World world_from_json(const std::string& json_text);

}  // namespace bf::synth
