#include "bf/core/io.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include "bf/util/csv.hpp"

namespace bf::core {

namespace {

constexpr const char* kTrajHeader = "scene_id,region_id,agent_id,kind,t_index,x,y";
constexpr const char* kMapHeader = "lane_id,point_index,x,y,successor_ids";
constexpr const char* kTargetsHeader = "scene_id,agent_id";

struct RawPoint {
  long long t_index;
  Point p;
};

}  // namespace

void ExperimentConfig::to_config(util::KeyValueConfig& kv) const {
  kv.set("t_obs", std::to_string(t_obs));
  kv.set("t_fut", std::to_string(t_fut));
  kv.set("sample_period", util::format_double(sample_period));
  kv.set("epsilon", util::format_double(epsilon));
  kv.set("n_modes", std::to_string(n_modes));
  kv.set("feature_dim", std::to_string(feature_dim));
  kv.set("behavior_cap", std::to_string(behavior_cap));
  kv.set("lambda_kd", util::format_double(lambda_kd));
  kv.set("kd_sites", std::to_string(kd_sites));
  kv.set("seed", std::to_string(seed));
}

SceneSet load_scenes(const std::string& path, const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::string> lines;
  try {
    lines = util::read_lines(path);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
  if (lines.empty() || lines[0] != kTrajHeader)
    throw MalformedRow(1, "missing or wrong header, expected: " + std::string(kTrajHeader));

  // scene -> agent -> (region, obs rows, fut rows)
  struct AgentRows {
    std::vector<RawPoint> obs, fut;
  };
  std::map<std::string, std::map<std::string, AgentRows>> grouped;
  std::map<std::string, std::string> scene_region;

  for (size_t i = 1; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    auto f = util::split(line, ',');
    if (f.size() != 7) throw MalformedRow(line_no, "expected 7 fields");
    const std::string& scene = f[0];
    const std::string& region = f[1];
    const std::string& agent = f[2];
    const std::string& kind = f[3];
    long long t_index = 0;
    Point p;
    if (scene.empty() || agent.empty()) throw MalformedRow(line_no, "empty identifier");
    if (!util::parse_int(f[4], t_index) || t_index < 0)
      throw MalformedRow(line_no, "bad t_index");
    if (!util::parse_double(f[5], p.x) || !util::parse_double(f[6], p.y))
      throw MalformedRow(line_no, "non-finite or unparseable coordinate");
    auto [it, inserted] = scene_region.try_emplace(scene, region);
    if (!inserted && it->second != region)
      throw MalformedRow(line_no, "region_id differs within scene " + scene);
    AgentRows& rows = grouped[scene][agent];
    if (kind == "obs") {
      rows.obs.push_back({t_index, p});
    } else if (kind == "fut") {
      rows.fut.push_back({t_index, p});
    } else {
      throw MalformedRow(line_no, "kind must be obs or fut");
    }
  }

  SceneSet set;
  for (auto& [scene_id, agents] : grouped) {
    Scene scene;
    scene.scene_id = scene_id;
    scene.region_id = scene_region[scene_id];
    for (auto& [agent_id, rows] : agents) {
      auto build = [&](std::vector<RawPoint>& raw, int expected, TrajKind kind) {
        if (static_cast<int>(raw.size()) != expected)
          throw LengthMismatch(scene_id, agent_id,
                               (kind == TrajKind::kObserved ? "observed" : "future") +
                                   std::string(" rows: got ") + std::to_string(raw.size()) +
                                   ", expected " + std::to_string(expected));
        std::sort(raw.begin(), raw.end(),
                  [](const RawPoint& a, const RawPoint& b) { return a.t_index < b.t_index; });
        Trajectory t;
        t.scene_id = scene_id;
        t.agent_id = agent_id;
        t.region_id = scene.region_id;
        t.sample_period = cfg.sample_period;
        t.kind = kind;
        for (int k = 0; k < expected; ++k) {
          if (raw[k].t_index != k)
            throw LengthMismatch(scene_id, agent_id, "t_index gap or duplicate");
          t.points.push_back(raw[k].p);
        }
        return t;
      };
      AgentTrack track;
      track.agent_id = agent_id;
      track.observed = build(rows.obs, cfg.t_obs, TrajKind::kObserved);
      track.future = build(rows.fut, cfg.t_fut, TrajKind::kFuture);
      scene.agents.push_back(std::move(track));
    }
    // Agents arrive sorted from the map; every agent is a target by default.
    for (const auto& a : scene.agents) scene.target_agent_ids.push_back(a.agent_id);
    set.scenes.push_back(std::move(scene));
  }
  return set;
}

void save_scenes(const SceneSet& set, const std::string& path) {
  std::string out(kTrajHeader);
  out += '\n';
  for (const Scene& scene : set.scenes) {
    for (const AgentTrack& agent : scene.agents) {
      auto emit = [&](const Trajectory& t, const char* kind) {
        for (size_t k = 0; k < t.points.size(); ++k) {
          out += scene.scene_id;
          out += ',';
          out += scene.region_id;
          out += ',';
          out += agent.agent_id;
          out += ',';
          out += kind;
          out += ',';
          out += std::to_string(k);
          out += ',';
          out += util::format_double(t.points[k].x);
          out += ',';
          out += util::format_double(t.points[k].y);
          out += '\n';
        }
      };
      emit(agent.observed, "obs");
      emit(agent.future, "fut");
    }
  }
  try {
    util::write_file(path, out);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
}

LaneMap load_map(const std::string& path) {
  std::vector<std::string> lines;
  try {
    lines = util::read_lines(path);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
  if (lines.empty() || lines[0] != kMapHeader)
    throw MalformedRow(1, "missing or wrong header, expected: " + std::string(kMapHeader));

  struct RawLane {
    std::vector<std::pair<long long, Point>> pts;
    std::vector<std::string> successors;
  };
  std::map<std::string, RawLane> grouped;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const int line_no = static_cast<int>(i + 1);
    auto f = util::split(lines[i], ',');
    if (f.size() != 5) throw MalformedRow(line_no, "expected 5 fields");
    long long idx = 0;
    Point p;
    if (f[0].empty()) throw MalformedRow(line_no, "empty lane_id");
    if (!util::parse_int(f[1], idx) || idx < 0) throw MalformedRow(line_no, "bad point_index");
    if (!util::parse_double(f[2], p.x) || !util::parse_double(f[3], p.y))
      throw MalformedRow(line_no, "non-finite or unparseable coordinate");
    RawLane& lane = grouped[f[0]];
    lane.pts.emplace_back(idx, p);
    if (!f[4].empty()) {
      for (auto& s : util::split(f[4], ';'))
        if (!s.empty()) lane.successors.push_back(s);
    }
  }

  LaneMap map;
  for (auto& [lane_id, raw] : grouped) {
    std::sort(raw.pts.begin(), raw.pts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    LaneSegmentDef lane;
    lane.lane_id = lane_id;
    for (size_t k = 0; k < raw.pts.size(); ++k) {
      if (raw.pts[k].first != static_cast<long long>(k))
        throw MalformedRow(0, "point_index gap in lane " + lane_id);
      lane.polyline.push_back(raw.pts[k].second);
    }
    if (lane.polyline.size() < 2)
      throw MalformedRow(0, "lane " + lane_id + " has fewer than 2 points");
    std::sort(raw.successors.begin(), raw.successors.end());
    raw.successors.erase(std::unique(raw.successors.begin(), raw.successors.end()),
                         raw.successors.end());
    lane.successors = std::move(raw.successors);
    map.lanes.push_back(std::move(lane));
  }
  for (const auto& lane : map.lanes)
    for (const auto& succ : lane.successors)
      if (!map.find(succ))
        throw MalformedRow(0, "lane " + lane.lane_id + " references unknown successor " + succ);
  return map;
}

void save_map(const LaneMap& map, const std::string& path) {
  std::string out(kMapHeader);
  out += '\n';
  for (const LaneSegmentDef& lane : map.lanes) {
    for (size_t k = 0; k < lane.polyline.size(); ++k) {
      out += lane.lane_id;
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += util::format_double(lane.polyline[k].x);
      out += ',';
      out += util::format_double(lane.polyline[k].y);
      out += ',';
      if (k == 0) {
        for (size_t s = 0; s < lane.successors.size(); ++s) {
          if (s) out += ';';
          out += lane.successors[s];
        }
      }
      out += '\n';
    }
  }
  try {
    util::write_file(path, out);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
}

void load_targets(const std::string& path, SceneSet& set) {
  std::vector<std::string> lines;
  try {
    lines = util::read_lines(path);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
  if (lines.empty() || lines[0] != kTargetsHeader)
    throw MalformedRow(1, "missing or wrong header, expected: " + std::string(kTargetsHeader));
  std::map<std::string, std::vector<std::string>> targets;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = util::split(lines[i], ',');
    if (f.size() != 2) throw MalformedRow(static_cast<int>(i + 1), "expected 2 fields");
    targets[f[0]].push_back(f[1]);
  }
  for (Scene& scene : set.scenes) {
    auto it = targets.find(scene.scene_id);
    if (it == targets.end()) continue;
    for (const std::string& agent : it->second)
      if (!scene.find_agent(agent))
        throw MalformedRow(0, "target " + agent + " not present in scene " + scene.scene_id);
    scene.target_agent_ids = it->second;
    std::sort(scene.target_agent_ids.begin(), scene.target_agent_ids.end());
  }
}

void save_targets(const SceneSet& set, const std::string& path) {
  std::string out(kTargetsHeader);
  out += '\n';
  for (const Scene& scene : set.scenes)
    for (const std::string& agent : scene.target_agent_ids) {
      out += scene.scene_id;
      out += ',';
      out += agent;
      out += '\n';
    }
  try {
    util::write_file(path, out);
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
}

SceneSet load_split(const std::string& dir, const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  SceneSet set = load_scenes((fs::path(dir) / "trajectories.csv").string(), cfg);
  const fs::path targets = fs::path(dir) / "targets.csv";
  if (fs::exists(targets)) load_targets(targets.string(), set);
  return set;
}

void save_split(const SceneSet& set, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  save_scenes(set, (fs::path(dir) / "trajectories.csv").string());
  save_targets(set, (fs::path(dir) / "targets.csv").string());
}

}  // namespace bf::core
