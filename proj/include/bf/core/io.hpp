#pragma once

#include <string>

#include "bf/core/types.hpp"

namespace bf::core {

// trajectories.csv columns, in exact order:
//   scene_id, region_id, agent_id, kind(obs|fut), t_index, x, y
// Coordinates use the shortest round-trip decimal form of 64-bit floats.
SceneSet load_scenes(const std::string& path, const ExperimentConfig& cfg);
void save_scenes(const SceneSet& set, const std::string& path);

// map.csv columns: lane_id, point_index, x, y, successor_ids
// (semicolon-separated, emitted on the point_index 0 row).
LaneMap load_map(const std::string& path);
void save_map(const LaneMap& map, const std::string& path);

// Optional targets.csv sidecar (scene_id, agent_id) naming the prediction
// targets of each scene. Without it every agent is a target.
void load_targets(const std::string& path, SceneSet& set);
void save_targets(const SceneSet& set, const std::string& path);

// Loads a split directory: trajectories.csv plus targets.csv when present.
SceneSet load_split(const std::string& dir, const ExperimentConfig& cfg);
void save_split(const SceneSet& set, const std::string& dir);

}  // namespace bf::core
