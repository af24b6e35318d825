#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bf/core/types.hpp"

namespace bf::db {

using AgentKey = std::pair<std::string, std::string>;  // (scene_id, agent_id)

// Result of an epsilon-radius query. Members are sorted ascending by the
// distance between the anchor and each trajectory's first point; ties break
// on (scene_id, agent_id). Membership is strict: distance < epsilon.
struct BehaviorSet {
  core::Point anchor;
  double epsilon = 0.0;
  std::vector<const core::Trajectory*> members;

  size_t size() const { return members.size(); }
};

// Returns the first min(size, cap) members under the BehaviorSet ordering.
BehaviorSet subsample(const BehaviorSet& bs, int cap);

struct DbStats {
  size_t count = 0;
  double mean_speed = 0.0;
  // (cell_x, cell_y) -> stored trajectory count; keys sorted.
  std::map<std::pair<int64_t, int64_t>, size_t> cell_histogram;

  std::string to_csv() const;
};

// Region-partitioned store of observed trajectories, indexed by a uniform
// grid hash over each trajectory's first point. Read-only after build;
// queries are safe to run concurrently.
class BehaviorDatabase {
 public:
  BehaviorDatabase() = default;
  BehaviorDatabase(const BehaviorDatabase&) = delete;
  BehaviorDatabase& operator=(const BehaviorDatabase&) = delete;
  BehaviorDatabase(BehaviorDatabase&&) = default;
  BehaviorDatabase& operator=(BehaviorDatabase&&) = default;

  // Keeps the observed trajectories of `region_id` that have full length
  // t_obs with finite values and mean speed >= 2 m/s (the "lower than 2 m/s"
  // filter is strict). Future trajectories are never stored.
  static BehaviorDatabase build(const core::SceneSet& scenes, const std::string& region_id,
                                double cell_size, const core::ExperimentConfig& cfg);

  // Exact epsilon-disk query against first points (strict '<'), minus the
  // excluded identities. Scans only the grid cells intersecting the disk.
  BehaviorSet query(const core::Point& location, double epsilon,
                    std::span<const AgentKey> exclude = {}) const;

  // Reference implementation: full scan with the same predicate. Used by
  // tests and the stats tooling; results must match query() exactly.
  BehaviorSet query_linear(const core::Point& location, double epsilon,
                           std::span<const AgentKey> exclude = {}) const;

  DbStats stats() const;

  size_t total_count() const { return storage_.size(); }
  double cell_size() const { return cell_size_; }
  const std::string& region_id() const { return region_id_; }
  const std::vector<core::Trajectory>& storage() const { return storage_; }

  void save(const std::string& path) const;
  static BehaviorDatabase load(const std::string& path);

  static constexpr double kMinSpeed = 2.0;  // m/s, strict lower cutoff

 private:
  void build_index();
  static int64_t cell_key(int64_t cx, int64_t cy) {
    return (cx << 32) ^ (cy & 0xffffffffLL);
  }

  std::string region_id_;
  double cell_size_ = 2.0;
  int t_obs_ = 5;
  double sample_period_ = 0.5;
  std::vector<core::Trajectory> storage_;  // sorted by (scene_id, agent_id)
  std::unordered_map<int64_t, std::vector<uint32_t>> cells_;
};

}  // namespace bf::db
