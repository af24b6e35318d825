#include "bf/db/behavior_db.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "bf/util/csv.hpp"

namespace bf::db {

namespace {

int64_t cell_coord(double v, double cell_size) {
  return static_cast<int64_t>(std::floor(v / cell_size));
}

bool is_excluded(const core::Trajectory& t, std::span<const AgentKey> exclude) {
  for (const auto& key : exclude)
    if (key.first == t.scene_id && key.second == t.agent_id) return true;
  return false;
}

void sort_members(BehaviorSet& bs) {
  std::sort(bs.members.begin(), bs.members.end(),
            [&](const core::Trajectory* a, const core::Trajectory* b) {
              const double da = core::squared_distance(bs.anchor, core::first_location(*a));
              const double db = core::squared_distance(bs.anchor, core::first_location(*b));
              if (da != db) return da < db;
              if (a->scene_id != b->scene_id) return a->scene_id < b->scene_id;
              return a->agent_id < b->agent_id;
            });
}

}  // namespace

BehaviorSet subsample(const BehaviorSet& bs, int cap) {
  if (cap < 0) throw std::invalid_argument("subsample cap must be >= 0");
  BehaviorSet out;
  out.anchor = bs.anchor;
  out.epsilon = bs.epsilon;
  const size_t n = std::min(bs.members.size(), static_cast<size_t>(cap));
  out.members.assign(bs.members.begin(), bs.members.begin() + n);
  return out;
}

BehaviorDatabase BehaviorDatabase::build(const core::SceneSet& scenes,
                                         const std::string& region_id, double cell_size,
                                         const core::ExperimentConfig& cfg) {
  if (cell_size <= 0.0) throw std::invalid_argument("cell_size must be positive");
  BehaviorDatabase db;
  db.region_id_ = region_id;
  db.cell_size_ = cell_size;
  db.t_obs_ = cfg.t_obs;
  db.sample_period_ = cfg.sample_period;

  for (const core::Scene& scene : scenes.scenes) {
    if (scene.region_id != region_id) continue;
    for (const core::AgentTrack& agent : scene.agents) {
      const core::Trajectory& obs = agent.observed;
      if (static_cast<int>(obs.points.size()) != cfg.t_obs) continue;
      bool finite = true;
      for (const core::Point& p : obs.points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) finite = false;
      if (!finite) continue;
      if (obs.mean_speed() < kMinSpeed) continue;
      db.storage_.push_back(obs);
    }
  }
  std::sort(db.storage_.begin(), db.storage_.end(),
            [](const core::Trajectory& a, const core::Trajectory& b) {
              if (a.scene_id != b.scene_id) return a.scene_id < b.scene_id;
              return a.agent_id < b.agent_id;
            });
  db.build_index();
  return db;
}

void BehaviorDatabase::build_index() {
  cells_.clear();
  for (uint32_t i = 0; i < storage_.size(); ++i) {
    const core::Point first = core::first_location(storage_[i]);
    const int64_t key =
        cell_key(cell_coord(first.x, cell_size_), cell_coord(first.y, cell_size_));
    cells_[key].push_back(i);
  }
}

BehaviorSet BehaviorDatabase::query(const core::Point& location, double epsilon,
                                    std::span<const AgentKey> exclude) const {
  BehaviorSet out;
  out.anchor = location;
  out.epsilon = epsilon;
  if (epsilon <= 0.0 || storage_.empty()) return out;

  const double eps2 = epsilon * epsilon;
  const int64_t cx0 = cell_coord(location.x - epsilon, cell_size_);
  const int64_t cx1 = cell_coord(location.x + epsilon, cell_size_);
  const int64_t cy0 = cell_coord(location.y - epsilon, cell_size_);
  const int64_t cy1 = cell_coord(location.y + epsilon, cell_size_);
  for (int64_t cx = cx0; cx <= cx1; ++cx) {
    for (int64_t cy = cy0; cy <= cy1; ++cy) {
      auto it = cells_.find(cell_key(cx, cy));
      if (it == cells_.end()) continue;
      for (uint32_t idx : it->second) {
        const core::Trajectory& t = storage_[idx];
        if (core::squared_distance(location, core::first_location(t)) >= eps2) continue;
        if (is_excluded(t, exclude)) continue;
        out.members.push_back(&t);
      }
    }
  }
  sort_members(out);
  return out;
}

BehaviorSet BehaviorDatabase::query_linear(const core::Point& location, double epsilon,
                                           std::span<const AgentKey> exclude) const {
  BehaviorSet out;
  out.anchor = location;
  out.epsilon = epsilon;
  if (epsilon <= 0.0) return out;
  const double eps2 = epsilon * epsilon;
  for (const core::Trajectory& t : storage_) {
    if (core::squared_distance(location, core::first_location(t)) >= eps2) continue;
    if (is_excluded(t, exclude)) continue;
    out.members.push_back(&t);
  }
  sort_members(out);
  return out;
}

DbStats BehaviorDatabase::stats() const {
  DbStats s;
  s.count = storage_.size();
  double speed_sum = 0.0;
  for (const core::Trajectory& t : storage_) speed_sum += t.mean_speed();
  s.mean_speed = storage_.empty() ? 0.0 : speed_sum / static_cast<double>(storage_.size());
  for (const auto& [key, members] : cells_) {
    const int64_t cx = key >> 32;
    const int64_t cy = static_cast<int32_t>(key & 0xffffffffLL);
    s.cell_histogram[{cx, cy}] += members.size();
  }
  return s;
}

std::string DbStats::to_csv() const {
  std::string out = "key,cell_x,cell_y,value\n";
  out += "count,,," + std::to_string(count) + "\n";
  out += "mean_speed,,," + util::format_double(mean_speed) + "\n";
  for (const auto& [cell, n] : cell_histogram) {
    out += "cell," + std::to_string(cell.first) + "," + std::to_string(cell.second) + "," +
           std::to_string(n) + "\n";
  }
  return out;
}

void BehaviorDatabase::save(const std::string& path) const {
  nlohmann::json meta{{"format", "bfdb"},
                      {"version", 1},
                      {"region_id", region_id_},
                      {"cell_size", cell_size_},
                      {"t_obs", t_obs_},
                      {"sample_period", sample_period_},
                      {"count", storage_.size()}};
  std::string out = "# " + meta.dump() + "\n";
  out += "scene_id,agent_id,t_index,x,y\n";
  for (const core::Trajectory& t : storage_) {
    for (size_t k = 0; k < t.points.size(); ++k) {
      out += t.scene_id;
      out += ',';
      out += t.agent_id;
      out += ',';
      out += std::to_string(k);
      out += ',';
      out += util::format_double(t.points[k].x);
      out += ',';
      out += util::format_double(t.points[k].y);
      out += '\n';
    }
  }
  try {
    util::write_file(path, out);
  } catch (const std::exception& e) {
    throw core::IoFailure(e.what());
  }
}

BehaviorDatabase BehaviorDatabase::load(const std::string& path) {
  std::vector<std::string> lines;
  try {
    lines = util::read_lines(path);
  } catch (const std::exception& e) {
    throw core::IoFailure(e.what());
  }
  if (lines.size() < 2 || lines[0].rfind("# ", 0) != 0)
    throw core::MalformedRow(1, "missing database metadata line");
  nlohmann::json meta = nlohmann::json::parse(lines[0].substr(2));
  BehaviorDatabase db;
  db.region_id_ = meta.at("region_id").get<std::string>();
  db.cell_size_ = meta.at("cell_size").get<double>();
  db.t_obs_ = meta.at("t_obs").get<int>();
  db.sample_period_ = meta.at("sample_period").get<double>();
  if (lines[1] != "scene_id,agent_id,t_index,x,y")
    throw core::MalformedRow(2, "wrong database header");

  core::Trajectory current;
  auto flush = [&]() {
    if (current.points.empty()) return;
    if (static_cast<int>(current.points.size()) != db.t_obs_)
      throw core::LengthMismatch(current.scene_id, current.agent_id, "stored length != t_obs");
    db.storage_.push_back(std::move(current));
    current = core::Trajectory{};
  };
  for (size_t i = 2; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto f = util::split(lines[i], ',');
    if (f.size() != 5) throw core::MalformedRow(static_cast<int>(i + 1), "expected 5 fields");
    long long t_index = 0;
    core::Point p;
    if (!util::parse_int(f[2], t_index) || !util::parse_double(f[3], p.x) ||
        !util::parse_double(f[4], p.y))
      throw core::MalformedRow(static_cast<int>(i + 1), "bad row");
    if (t_index == 0) flush();
    if (current.points.empty()) {
      current.scene_id = f[0];
      current.agent_id = f[1];
      current.region_id = db.region_id_;
      current.sample_period = db.sample_period_;
      current.kind = core::TrajKind::kObserved;
    } else if (current.scene_id != f[0] || current.agent_id != f[1]) {
      throw core::MalformedRow(static_cast<int>(i + 1), "trajectory rows interleaved");
    }
    if (static_cast<size_t>(t_index) != current.points.size())
      throw core::MalformedRow(static_cast<int>(i + 1), "t_index out of order");
    current.points.push_back(p);
  }
  flush();
  if (meta.contains("count") && meta.at("count").get<size_t>() != db.storage_.size())
    throw core::MalformedRow(1, "metadata count does not match row count");
  db.build_index();
  return db;
}

}  // namespace bf::db
