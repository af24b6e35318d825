#pragma once

#include <filesystem>
#include <string>

#include "bf/core/types.hpp"
#include "bf/util/rng.hpp"

namespace bf::test {

// Unique scratch directory under the build tree; wiped on construction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() / ("bf_test_" + name);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string path() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline core::Trajectory make_traj(const std::string& scene, const std::string& agent,
                                  std::vector<core::Point> pts,
                                  core::TrajKind kind = core::TrajKind::kObserved,
                                  double dt = 0.5) {
  core::Trajectory t;
  t.scene_id = scene;
  t.agent_id = agent;
  t.region_id = "r0";
  t.points = std::move(pts);
  t.sample_period = dt;
  t.kind = kind;
  return t;
}

// Random well-formed scene set for round-trip and filter tests.
inline core::SceneSet random_scene_set(util::Rng& rng, int n_scenes,
                                       const core::ExperimentConfig& cfg,
                                       const std::string& region = "r0") {
  core::SceneSet set;
  for (int s = 0; s < n_scenes; ++s) {
    core::Scene scene;
    char buf[16];
    snprintf(buf, sizeof(buf), "s%04d", s);
    scene.scene_id = buf;
    scene.region_id = region;
    const int n_agents = 1 + static_cast<int>(rng.uniform_int(4));
    for (int a = 0; a < n_agents; ++a) {
      char ab[16];
      snprintf(ab, sizeof(ab), "a%02d", a);
      core::AgentTrack track;
      track.agent_id = ab;
      const core::Point start{rng.uniform(-500, 500), rng.uniform(-500, 500)};
      const double vx = rng.uniform(-8, 8), vy = rng.uniform(-8, 8);
      auto fill = [&](core::Trajectory& t, int n, int offset, core::TrajKind kind) {
        t = make_traj(scene.scene_id, ab, {}, kind, cfg.sample_period);
        t.region_id = region;
        for (int k = 0; k < n; ++k) {
          const double time = (offset + k) * cfg.sample_period;
          t.points.push_back({start.x + vx * time + rng.uniform(-0.1, 0.1),
                              start.y + vy * time + rng.uniform(-0.1, 0.1)});
        }
      };
      fill(track.observed, cfg.t_obs, 0, core::TrajKind::kObserved);
      fill(track.future, cfg.t_fut, cfg.t_obs, core::TrajKind::kFuture);
      scene.agents.push_back(std::move(track));
    }
    for (const auto& a : scene.agents) scene.target_agent_ids.push_back(a.agent_id);
    set.scenes.push_back(std::move(scene));
  }
  return set;
}

}  // namespace bf::test
