#include "bf/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "bf/util/csv.hpp"
#include "bf/util/parallel.hpp"
#include "bf/util/rng.hpp"

namespace bf::synth {

namespace {

constexpr std::array<core::Point, 4> kDirs{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
constexpr const char* kDirNames = "ENWS";

core::Point cw(const core::Point& d) { return {d.y, -d.x}; }

int turn_exit_dir(int dir, Turn t) {
  switch (t) {
    case Turn::kLeft: return (dir + 1) % 4;
    case Turn::kRight: return (dir + 3) % 4;
    default: return dir;
  }
}

struct ArcPath {
  std::vector<core::Point> points;
  std::vector<double> cum;  // cumulative length per point

  void append(const core::Point& p) {
    if (!points.empty()) {
      const double d = core::distance(points.back(), p);
      if (d == 0.0) return;  // shared joint between consecutive lanes
      cum.push_back(cum.back() + d);
    } else {
      cum.push_back(0.0);
    }
    points.push_back(p);
  }

  double length() const { return cum.empty() ? 0.0 : cum.back(); }

  // Position and unit direction at arc length s; extrapolates straight
  // beyond either end.
  void eval(double s, core::Point& pos, core::Point& dir) const {
    const size_t n = points.size();
    if (n < 2) {
      pos = points.empty() ? core::Point{} : points[0];
      dir = {1, 0};
      return;
    }
    size_t seg = 0;
    if (s <= 0.0) {
      seg = 0;
    } else if (s >= cum.back()) {
      seg = n - 2;
    } else {
      seg = static_cast<size_t>(
                std::upper_bound(cum.begin(), cum.end(), s) - cum.begin()) - 1;
      if (seg > n - 2) seg = n - 2;
    }
    const core::Point& a = points[seg];
    const core::Point& b = points[seg + 1];
    const double seg_len = cum[seg + 1] - cum[seg];
    const double ux = (b.x - a.x) / seg_len;
    const double uy = (b.y - a.y) / seg_len;
    const double local = s - cum[seg];
    pos = {a.x + ux * local, a.y + uy * local};
    dir = {ux, uy};
  }
};

std::string link_id(int px, int py, int qx, int qy) {
  return "L:" + std::to_string(px) + ":" + std::to_string(py) + ":" + std::to_string(qx) +
         ":" + std::to_string(qy);
}

std::string connector_id(int ix, int iy, int dir, Turn t) {
  const char tn = t == Turn::kLeft ? 'L' : (t == Turn::kStraight ? 'S' : 'R');
  return std::string("C:") + std::to_string(ix) + ":" + std::to_string(iy) + ":" +
         kDirNames[dir] + ":" + tn;
}

std::vector<core::Point> connector_polyline(const core::Point& center, int dir, Turn t) {
  const core::Point d = kDirs[dir];
  const core::Point r = cw(d);
  const double box = World::kBoxRadius;
  const double off = World::kLaneOffset;
  const core::Point entry{center.x - box * d.x + off * r.x, center.y - box * d.y + off * r.y};
  const core::Point dp = kDirs[turn_exit_dir(dir, t)];
  const core::Point rp = cw(dp);
  const core::Point exit{center.x + box * dp.x + off * rp.x, center.y + box * dp.y + off * rp.y};
  if (t == Turn::kStraight) return {entry, exit};

  // Quarter-circle arc; the center falls out of the entry/exit tangents.
  core::Point arc_center;
  double radius;
  double sweep;  // signed, left positive
  if (t == Turn::kRight) {
    radius = box - off;
    arc_center = {center.x - box * d.x + box * r.x, center.y - box * d.y + box * r.y};
    sweep = -M_PI / 2.0;
  } else {
    radius = box + off;
    arc_center = {center.x - box * d.x - box * r.x, center.y - box * d.y - box * r.y};
    sweep = M_PI / 2.0;
  }
  const double phi0 = std::atan2(entry.y - arc_center.y, entry.x - arc_center.x);
  const int n_pts = t == Turn::kRight ? 4 : 5;
  std::vector<core::Point> pts;
  pts.push_back(entry);
  for (int k = 1; k < n_pts - 1; ++k) {
    const double phi = phi0 + sweep * static_cast<double>(k) / (n_pts - 1);
    pts.push_back({arc_center.x + radius * std::cos(phi), arc_center.y + radius * std::sin(phi)});
  }
  pts.push_back(exit);
  return pts;
}

}  // namespace

const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    default: return "test";
  }
}

void WorldSpec::validate() const {
  if (grid_n < 1) throw std::invalid_argument("grid_n must be >= 1");
  if (lane_spacing <= 2.0 * World::kBoxRadius)
    throw std::invalid_argument("lane_spacing must exceed the intersection size");
  if (!turn_priors.empty()) {
    if (static_cast<int>(turn_priors.size()) != grid_n * grid_n)
      throw std::invalid_argument("turn_priors must have grid_n^2 entries");
    for (const auto& p : turn_priors) {
      if (p[0] < 0 || p[1] < 0 || p[2] < 0)
        throw std::invalid_argument("turn priors must be non-negative");
      if (std::abs(p[0] + p[1] + p[2] - 1.0) > 1e-9)
        throw std::invalid_argument("turn priors must sum to 1");
    }
  }
  if (speed_min < 2.5) throw std::invalid_argument("speed_min must be >= 2.5 m/s");
  if (speed_max < speed_min) throw std::invalid_argument("speed_max < speed_min");
  if (lateral_noise_sd < 0.0) throw std::invalid_argument("lateral_noise_sd must be >= 0");
  if (n_train < 0 || n_val < 0 || n_test < 0)
    throw std::invalid_argument("split sizes must be >= 0");
  if (agents_min < 1 || agents_max < agents_min)
    throw std::invalid_argument("bad agents_per_scene range");
  if (t_obs < 2 || t_fut < 1) throw std::invalid_argument("t_obs >= 2 and t_fut >= 1 required");
  if (sample_period <= 0.0) throw std::invalid_argument("sample_period must be positive");
}

WorldSpec WorldSpec::from_config(const util::KeyValueConfig& kv) {
  WorldSpec s;
  s.grid_n = static_cast<int>(kv.get_int("grid_n", s.grid_n));
  s.lane_spacing = kv.get_double("lane_spacing", s.lane_spacing);
  s.speed_min = kv.get_double("speed_min", s.speed_min);
  s.speed_max = kv.get_double("speed_max", s.speed_max);
  s.lateral_noise_sd = kv.get_double("lateral_noise_sd", s.lateral_noise_sd);
  s.n_train = static_cast<int>(kv.get_int("n_train", s.n_train));
  s.n_val = static_cast<int>(kv.get_int("n_val", s.n_val));
  s.n_test = static_cast<int>(kv.get_int("n_test", s.n_test));
  s.agents_min = static_cast<int>(kv.get_int("agents_min", s.agents_min));
  s.agents_max = static_cast<int>(kv.get_int("agents_max", s.agents_max));
  s.t_obs = static_cast<int>(kv.get_int("t_obs", s.t_obs));
  s.t_fut = static_cast<int>(kv.get_int("t_fut", s.t_fut));
  s.sample_period = kv.get_double("sample_period", s.sample_period);
  s.seed = static_cast<uint64_t>(kv.get_int("seed", static_cast<long long>(s.seed)));
  s.region_id = kv.get_str("region_id", s.region_id);
  const std::string priors = kv.get_str("turn_priors", "");
  if (!priors.empty()) {
    for (const std::string& entry : util::split(priors, ';')) {
      auto f = util::split(entry, ',');
      if (f.size() != 3) throw std::invalid_argument("turn_priors entries need 3 values");
      std::array<double, 3> p{};
      for (int i = 0; i < 3; ++i)
        if (!util::parse_double(f[i], p[i]))
          throw std::invalid_argument("bad turn prior value: " + f[i]);
      s.turn_priors.push_back(p);
    }
  }
  s.validate();
  return s;
}

void WorldSpec::to_config(util::KeyValueConfig& kv) const {
  kv.set("grid_n", std::to_string(grid_n));
  kv.set("lane_spacing", util::format_double(lane_spacing));
  kv.set("speed_min", util::format_double(speed_min));
  kv.set("speed_max", util::format_double(speed_max));
  kv.set("lateral_noise_sd", util::format_double(lateral_noise_sd));
  kv.set("n_train", std::to_string(n_train));
  kv.set("n_val", std::to_string(n_val));
  kv.set("n_test", std::to_string(n_test));
  kv.set("agents_min", std::to_string(agents_min));
  kv.set("agents_max", std::to_string(agents_max));
  kv.set("t_obs", std::to_string(t_obs));
  kv.set("t_fut", std::to_string(t_fut));
  kv.set("sample_period", util::format_double(sample_period));
  kv.set("seed", std::to_string(seed));
  kv.set("region_id", region_id);
  if (!turn_priors.empty()) {
    std::string out;
    for (size_t i = 0; i < turn_priors.size(); ++i) {
      if (i) out += ';';
      out += util::format_double(turn_priors[i][0]) + "," +
             util::format_double(turn_priors[i][1]) + "," +
             util::format_double(turn_priors[i][2]);
    }
    kv.set("turn_priors", out);
  }
}

core::Point World::intersection_center(int idx) const {
  const int ix = idx % spec.grid_n;
  const int iy = idx / spec.grid_n;
  return {ix * spec.lane_spacing, iy * spec.lane_spacing};
}

int World::inbound_link(int intersection, int dir) const { return inbound_[intersection][dir]; }
int World::outbound_link(int intersection, int dir) const { return outbound_[intersection][dir]; }
int World::connector(int intersection, int dir, Turn t) const {
  return connector_[intersection][dir][static_cast<int>(t)];
}

World generate_world(const WorldSpec& spec, uint64_t seed) {
  spec.validate();
  World w;
  w.spec = spec;
  w.spec.seed = seed;
  const int n = spec.grid_n;
  const double sp = spec.lane_spacing;

  // Lanes are assembled name-first so lane_map arrives sorted by lane_id.
  struct Build {
    core::LaneSegmentDef lane;
    World::LaneMeta meta;
  };
  std::map<std::string, Build> lanes;

  auto center_of = [&](int px, int py) { return core::Point{px * sp, py * sp}; };
  auto in_grid = [&](int px, int py) { return px >= 0 && px < n && py >= 0 && py < n; };

  // Directed links (including boundary stubs on both ends).
  for (int py = -1; py <= n; ++py) {
    for (int px = -1; px <= n; ++px) {
      for (int dir = 0; dir < 4; ++dir) {
        const int qx = px + static_cast<int>(kDirs[dir].x);
        const int qy = py + static_cast<int>(kDirs[dir].y);
        if (!in_grid(px, py) && !in_grid(qx, qy)) continue;
        if (px < -1 || px > n || qx < -1 || qx > n || py < -1 || py > n || qy < -1 || qy > n)
          continue;
        const core::Point ca = center_of(px, py);
        const core::Point cb = center_of(qx, qy);
        const core::Point d = kDirs[dir];
        const core::Point r = cw(d);
        Build b;
        b.lane.lane_id = link_id(px, py, qx, qy);
        b.lane.polyline = {
            {ca.x + World::kBoxRadius * d.x + World::kLaneOffset * r.x,
             ca.y + World::kBoxRadius * d.y + World::kLaneOffset * r.y},
            {cb.x - World::kBoxRadius * d.x + World::kLaneOffset * r.x,
             cb.y - World::kBoxRadius * d.y + World::kLaneOffset * r.y}};
        b.meta.role = World::LaneMeta::Role::kLink;
        b.meta.dir = dir;
        b.meta.to_intersection = in_grid(qx, qy) ? qy * n + qx : -1;
        lanes.emplace(b.lane.lane_id, std::move(b));
      }
    }
  }

  // Connectors.
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      for (int dir = 0; dir < 4; ++dir) {
        for (Turn t : {Turn::kLeft, Turn::kStraight, Turn::kRight}) {
          Build b;
          b.lane.lane_id = connector_id(ix, iy, dir, t);
          b.lane.polyline = connector_polyline(center_of(ix, iy), dir, t);
          b.meta.role = World::LaneMeta::Role::kConnector;
          b.meta.at_intersection = iy * n + ix;
          b.meta.dir = dir;
          b.meta.turn = static_cast<int>(t);
          lanes.emplace(b.lane.lane_id, std::move(b));
        }
      }
    }
  }

  // Successor wiring by name, then flatten.
  for (auto& [id, b] : lanes) {
    if (b.meta.role == World::LaneMeta::Role::kLink) {
      if (b.meta.to_intersection >= 0) {
        const int ix = b.meta.to_intersection % n;
        const int iy = b.meta.to_intersection / n;
        for (Turn t : {Turn::kLeft, Turn::kStraight, Turn::kRight})
          b.lane.successors.push_back(connector_id(ix, iy, b.meta.dir, t));
      }
    } else {
      const int ix = b.meta.at_intersection % n;
      const int iy = b.meta.at_intersection / n;
      const int exit_dir = turn_exit_dir(b.meta.dir, static_cast<Turn>(b.meta.turn));
      const int qx = ix + static_cast<int>(kDirs[exit_dir].x);
      const int qy = iy + static_cast<int>(kDirs[exit_dir].y);
      b.lane.successors.push_back(link_id(ix, iy, qx, qy));
    }
    std::sort(b.lane.successors.begin(), b.lane.successors.end());
  }

  std::map<std::string, int> index_of;
  int next = 0;
  for (auto& [id, b] : lanes) index_of[id] = next++;
  w.lane_map.lanes.reserve(lanes.size());
  w.meta.reserve(lanes.size());
  for (auto& [id, b] : lanes) {
    core::LaneSegmentDef lane = std::move(b.lane);
    World::LaneMeta meta = b.meta;
    double len = 0.0;
    for (size_t i = 1; i < lane.polyline.size(); ++i)
      len += core::distance(lane.polyline[i - 1], lane.polyline[i]);
    meta.length = len;
    if (meta.role == World::LaneMeta::Role::kLink && meta.to_intersection >= 0) {
      const int ix = meta.to_intersection % n;
      const int iy = meta.to_intersection / n;
      for (Turn t : {Turn::kLeft, Turn::kStraight, Turn::kRight})
        meta.succ_by_turn[static_cast<int>(t)] = index_of.at(connector_id(ix, iy, meta.dir, t));
    } else if (meta.role == World::LaneMeta::Role::kConnector) {
      meta.succ = index_of.at(lane.successors[0]);
    }
    w.lane_map.lanes.push_back(std::move(lane));
    w.meta.push_back(meta);
  }

  // Routing tables.
  w.inbound_.assign(n * n, {-1, -1, -1, -1});
  w.outbound_.assign(n * n, {-1, -1, -1, -1});
  w.connector_.assign(n * n, {});
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int idx = iy * n + ix;
      for (int dir = 0; dir < 4; ++dir) {
        const int pxi = ix - static_cast<int>(kDirs[dir].x);
        const int pyi = iy - static_cast<int>(kDirs[dir].y);
        w.inbound_[idx][dir] = index_of.at(link_id(pxi, pyi, ix, iy));
        const int qxi = ix + static_cast<int>(kDirs[dir].x);
        const int qyi = iy + static_cast<int>(kDirs[dir].y);
        w.outbound_[idx][dir] = index_of.at(link_id(ix, iy, qxi, qyi));
        for (Turn t : {Turn::kLeft, Turn::kStraight, Turn::kRight})
          w.connector_[idx][dir][static_cast<int>(t)] =
              index_of.at(connector_id(ix, iy, dir, t));
      }
    }
  }

  // Priors and popularity.
  if (!spec.turn_priors.empty()) {
    w.turn_priors = spec.turn_priors;
  } else {
    util::Rng rng(util::derive_seed(seed, 1000001));
    for (int i = 0; i < n * n; ++i) {
      const int dominant = static_cast<int>(rng.uniform_int(3));
      std::array<double, 3> p{};
      p[dominant] = 0.7;
      p[(dominant + 1) % 3] = 0.2;
      p[(dominant + 2) % 3] = 0.1;
      w.turn_priors.push_back(p);
    }
  }
  {
    util::Rng rng(util::derive_seed(seed, 1000002));
    double total = 0.0;
    for (int i = 0; i < n * n; ++i) {
      w.popularity.push_back(std::exp(1.2 * rng.normal()));
      total += w.popularity.back();
    }
    for (double& p : w.popularity) p /= total;
  }
  return w;
}

namespace {

struct AgentPlan {
  ArcPath path;
  double spawn_arc = 0.0;
  double speed = 0.0;
  std::vector<std::pair<int, Turn>> crossings;  // (intersection, sampled turn)
};

// Builds the lane-following route for one agent, sampling turns from each
// crossed intersection's prior until the path covers the required length.
AgentPlan plan_agent(const World& world, util::Rng& rng, int start_lane, double spawn_arc,
                     double speed, double needed_len) {
  AgentPlan plan;
  plan.spawn_arc = spawn_arc;
  plan.speed = speed;
  int lane = start_lane;
  while (true) {
    const core::LaneSegmentDef& def = world.lane_map.lanes[lane];
    for (const core::Point& p : def.polyline) plan.path.append(p);
    if (plan.path.length() >= spawn_arc + needed_len) break;
    const World::LaneMeta& meta = world.meta[lane];
    if (meta.role == World::LaneMeta::Role::kLink) {
      if (meta.to_intersection < 0) break;  // outbound stub: extrapolate past the end
      const auto& prior = world.turn_priors[meta.to_intersection];
      const Turn turn = static_cast<Turn>(rng.categorical(prior));
      plan.crossings.emplace_back(meta.to_intersection, turn);
      lane = meta.succ_by_turn[static_cast<int>(turn)];
    } else {
      lane = world.meta[lane].succ;
    }
  }
  return plan;
}

core::Trajectory make_traj(const std::string& scene_id, const std::string& agent_id,
                           const std::string& region_id, double sample_period,
                           core::TrajKind kind) {
  core::Trajectory t;
  t.scene_id = scene_id;
  t.agent_id = agent_id;
  t.region_id = region_id;
  t.sample_period = sample_period;
  t.kind = kind;
  return t;
}

}  // namespace

SimResult simulate_agents(const World& world, const WorldSpec& spec, Split split,
                          uint64_t seed) {
  spec.validate();
  const int n_scenes = spec.n_scenes(split);
  const char* prefix = split == Split::kTrain ? "tr" : (split == Split::kVal ? "va" : "te");
  const uint64_t split_seed = util::derive_seed(seed, static_cast<uint64_t>(split) + 11);
  const int total_steps = spec.t_obs + spec.t_fut;
  const double dt = spec.sample_period;

  std::vector<core::Scene> scenes(n_scenes);
  std::vector<std::vector<TurnEvent>> turn_logs(n_scenes);

  util::parallel_for(static_cast<size_t>(n_scenes), [&](size_t si) {
    util::Rng rng(util::derive_seed(split_seed, si));
    char scene_name[16];
    snprintf(scene_name, sizeof(scene_name), "%s%05zu", prefix, si);

    core::Scene scene;
    scene.scene_id = scene_name;
    scene.region_id = spec.region_id;
    scene.map_ref = spec.region_id;

    const int intersection = static_cast<int>(rng.categorical(world.popularity));
    const int n_agents =
        spec.agents_min + static_cast<int>(rng.uniform_int(spec.agents_max - spec.agents_min + 1));

    for (int a = 0; a < n_agents; ++a) {
      char agent_name[16];
      snprintf(agent_name, sizeof(agent_name), "a%02d", a);
      const double speed = rng.uniform(spec.speed_min, spec.speed_max);

      int lane;
      double spawn_arc;
      if (a == 0) {
        // Prediction target: current point lands on the approach of the
        // scene's intersection, a short headway before the entry.
        const int dir = static_cast<int>(rng.uniform_int(4));
        lane = world.inbound_link(intersection, dir);
        const double len = world.meta[lane].length;
        const double before_entry = rng.uniform(0.5, len - 0.5);
        const double current_arc = len - before_entry;
        spawn_arc = std::max(0.0, current_arc - (spec.t_obs - 1) * dt * speed);
      } else {
        const double pick = rng.uniform();
        const int dir = static_cast<int>(rng.uniform_int(4));
        if (pick < 0.5) {
          lane = world.inbound_link(intersection, dir);
          spawn_arc = rng.uniform(0.0, world.meta[lane].length);
        } else if (pick < 0.75) {
          // Mid-crossing agent; its turn is a draw from the local prior.
          const Turn t = static_cast<Turn>(rng.categorical(world.turn_priors[intersection]));
          turn_logs[si].push_back({scene.scene_id, agent_name, intersection, t});
          lane = world.connector(intersection, dir, t);
          spawn_arc = rng.uniform(0.0, world.meta[lane].length);
        } else {
          lane = world.outbound_link(intersection, dir);
          spawn_arc = rng.uniform(0.0, 0.5 * world.meta[lane].length);
        }
      }

      const double needed = spawn_arc + speed * dt * (total_steps - 1) + 1.0;
      AgentPlan plan = plan_agent(world, rng, lane, spawn_arc, speed, needed);
      for (const auto& [ic, turn] : plan.crossings)
        turn_logs[si].push_back({scene.scene_id, agent_name, ic, turn});

      core::AgentTrack track;
      track.agent_id = agent_name;
      track.observed = make_traj(scene.scene_id, agent_name, spec.region_id, dt,
                                 core::TrajKind::kObserved);
      track.future =
          make_traj(scene.scene_id, agent_name, spec.region_id, dt, core::TrajKind::kFuture);
      for (int k = 0; k < total_steps; ++k) {
        const double s = spawn_arc + speed * dt * k;
        core::Point pos, dir;
        plan.path.eval(s, pos, dir);
        const double lat = spec.lateral_noise_sd * rng.normal();
        const core::Point p{pos.x - lat * dir.y, pos.y + lat * dir.x};
        if (k < spec.t_obs)
          track.observed.points.push_back(p);
        else
          track.future.points.push_back(p);
      }
      scene.agents.push_back(std::move(track));
    }
    std::sort(scene.agents.begin(), scene.agents.end(),
              [](const core::AgentTrack& a, const core::AgentTrack& b) {
                return a.agent_id < b.agent_id;
              });
    scene.target_agent_ids = {"a00"};
    scenes[si] = std::move(scene);
  });

  SimResult result;
  result.scenes.scenes = std::move(scenes);
  for (auto& log : turn_logs)
    result.turns.insert(result.turns.end(), log.begin(), log.end());
  return result;
}

Benchmark make_benchmark(const WorldSpec& spec, double cell_size) {
  spec.validate();
  Benchmark b{generate_world(spec, spec.seed), {}, {}, {}, {}, {}, {}};
  b.train = simulate_agents(b.world, spec, Split::kTrain, spec.seed).scenes;
  b.val = simulate_agents(b.world, spec, Split::kVal, spec.seed).scenes;
  b.test = simulate_agents(b.world, spec, Split::kTest, spec.seed).scenes;

  core::ExperimentConfig cfg;
  cfg.t_obs = spec.t_obs;
  cfg.t_fut = spec.t_fut;
  cfg.sample_period = spec.sample_period;
  b.db_train = db::BehaviorDatabase::build(b.train, spec.region_id, cell_size, cfg);
  b.db_val = db::BehaviorDatabase::build(b.val, spec.region_id, cell_size, cfg);
  b.db_test = db::BehaviorDatabase::build(b.test, spec.region_id, cell_size, cfg);
  return b;
}

std::string world_to_json(const World& world) {
  util::KeyValueConfig kv;
  world.spec.to_config(kv);
  nlohmann::json spec_json;
  for (const auto& [k, v] : kv.entries()) spec_json[k] = v;
  nlohmann::json j{{"format", "bfworld"}, {"version", 1}, {"spec", spec_json}};
  for (const auto& p : world.turn_priors) j["turn_priors"].push_back({p[0], p[1], p[2]});
  j["popularity"] = world.popularity;
  return j.dump(2) + "\n";
}

World world_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  util::KeyValueConfig kv;
  for (auto& [k, v] : j.at("spec").items()) kv.set(k, v.get<std::string>());
  WorldSpec spec = WorldSpec::from_config(kv);
  World world = generate_world(spec, spec.seed);
  // Stored priors/popularity win over regeneration (explicit overrides).
  if (j.contains("turn_priors")) {
    world.turn_priors.clear();
    for (const auto& p : j.at("turn_priors"))
      world.turn_priors.push_back({p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
  }
  if (j.contains("popularity")) world.popularity = j.at("popularity").get<std::vector<double>>();
  return world;
}

}  // namespace bf::synth
