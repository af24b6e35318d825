#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "bf/db/behavior_db.hpp"
#include "bf/util/rng.hpp"
#include "test_helpers.hpp"

using namespace bf;

namespace {

core::SceneSet scenes_from_trajectories(const std::vector<core::Trajectory>& trajs,
                                        int t_fut = 12) {
  // One scene per trajectory, future filled with a copy so lengths validate.
  core::SceneSet set;
  for (const auto& obs : trajs) {
    core::Scene scene;
    scene.scene_id = obs.scene_id;
    scene.region_id = obs.region_id;
    core::AgentTrack track;
    track.agent_id = obs.agent_id;
    track.observed = obs;
    track.future = obs;
    track.future.kind = core::TrajKind::kFuture;
    track.future.points.assign(t_fut, obs.points.back());
    scene.agents.push_back(std::move(track));
    scene.target_agent_ids = {obs.agent_id};
    set.scenes.push_back(std::move(scene));
  }
  std::sort(set.scenes.begin(), set.scenes.end(),
            [](const core::Scene& a, const core::Scene& b) { return a.scene_id < b.scene_id; });
  return set;
}

core::Trajectory straight_traj(const std::string& scene, const std::string& agent,
                               core::Point start, double step_len, int t_obs = 5) {
  std::vector<core::Point> pts;
  for (int k = 0; k < t_obs; ++k) pts.push_back({start.x + step_len * k, start.y});
  auto t = test::make_traj(scene, agent, pts);
  return t;
}

std::set<std::pair<std::string, std::string>> ids_of(const db::BehaviorSet& bs) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto* t : bs.members) out.insert({t->scene_id, t->agent_id});
  return out;
}

}  // namespace

TEST_CASE("build filter: mean speed exactly 2.0 m/s is kept, slower excluded") {
  // 1 m per 0.5 s step = 2 m/s exactly; the cut is strict "< 2" so it stays.
  std::vector<core::Trajectory> trajs;
  trajs.push_back(straight_traj("s0", "a0", {0, 0}, 1.0));
  trajs.push_back(straight_traj("s1", "a0", {10, 0}, 0.0));        // stationary
  trajs.push_back(straight_traj("s2", "a0", {20, 0}, 0.999999));   // just under 2 m/s
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);
  REQUIRE(db.total_count() == 1);
  CHECK(db.storage()[0].scene_id == "s0");
}

TEST_CASE("build filter matches a linear-scan oracle on random data") {
  util::Rng rng(991);
  std::vector<core::Trajectory> trajs;
  size_t expected_kept = 0;
  for (int i = 0; i < 1000; ++i) {
    const double step = rng.uniform(0.0, 2.0);  // speeds 0..4 m/s, half below cutoff
    auto t = straight_traj("s" + std::to_string(i), "a0",
                           {rng.uniform(-100, 100), rng.uniform(-100, 100)}, step);
    if (t.mean_speed() >= 2.0) ++expected_kept;
    trajs.push_back(std::move(t));
  }
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);
  CHECK(db.total_count() == expected_kept);
}

TEST_CASE("build stores only the requested region and never futures") {
  std::vector<core::Trajectory> trajs;
  trajs.push_back(straight_traj("s0", "a0", {0, 0}, 1.5));
  auto other = straight_traj("s1", "a0", {5, 5}, 1.5);
  other.region_id = "r1";
  trajs.push_back(other);
  core::ExperimentConfig cfg;
  auto set = scenes_from_trajectories(trajs);
  set.scenes[1].region_id = "r1";
  for (auto& a : set.scenes[1].agents) {
    a.observed.region_id = "r1";
    a.future.region_id = "r1";
  }
  auto db = db::BehaviorDatabase::build(set, "r0", 2.0, cfg);
  CHECK(db.total_count() == 1);
  for (const auto& t : db.storage()) CHECK(t.kind == core::TrajKind::kObserved);
}

TEST_CASE("query: empty database yields empty set") {
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(core::SceneSet{}, "r0", 2.0, cfg);
  CHECK(db.total_count() == 0);
  CHECK(db.query({0, 0}, 1.0).size() == 0);
}

TEST_CASE("query strictness: distance 0 in, distance exactly epsilon out") {
  std::vector<core::Trajectory> trajs;
  trajs.push_back(straight_traj("s0", "a0", {0, 0}, 1.5));     // first point at origin
  trajs.push_back(straight_traj("s1", "a0", {0.5, 0}, 1.5));   // first point at distance 0.5
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);

  auto at_anchor = db.query({0, 0}, 0.5);
  REQUIRE(at_anchor.size() == 1);
  CHECK(at_anchor.members[0]->scene_id == "s0");  // 0 < 0.5 in, 0.5 < 0.5 out

  auto wider = db.query({0, 0}, 0.5000001);
  CHECK(wider.size() == 2);
}

TEST_CASE("query excludes the requested identities") {
  std::vector<core::Trajectory> trajs;
  trajs.push_back(straight_traj("s0", "a0", {0, 0}, 1.5));
  trajs.push_back(straight_traj("s1", "a7", {0.1, 0}, 1.5));
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);
  std::vector<db::AgentKey> exclude{{"s1", "a7"}};
  auto bs = db.query({0, 0}, 1.0, exclude);
  REQUIRE(bs.size() == 1);
  CHECK(bs.members[0]->scene_id == "s0");
}

TEST_CASE("indexed query equals linear scan over random data, all epsilons") {
  util::Rng rng(2024);
  std::vector<core::Trajectory> trajs;
  for (int i = 0; i < 3000; ++i) {
    char scene[16], agent[8];
    snprintf(scene, sizeof(scene), "s%05d", i);
    snprintf(agent, sizeof(agent), "a%d", static_cast<int>(rng.uniform_int(4)));
    trajs.push_back(straight_traj(scene, agent,
                                  {rng.uniform(-60, 60), rng.uniform(-60, 60)},
                                  rng.uniform(1.0, 3.0)));
  }
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);

  for (double eps : {0.5, 1.0, 1.5, 4.0}) {
    for (int q = 0; q < 200; ++q) {
      const core::Point loc{rng.uniform(-62, 62), rng.uniform(-62, 62)};
      auto fast = db.query(loc, eps);
      auto slow = db.query_linear(loc, eps);
      REQUIRE(fast.size() == slow.size());
      for (size_t k = 0; k < fast.members.size(); ++k)
        CHECK(fast.members[k] == slow.members[k]);  // same order and same objects
    }
  }
}

TEST_CASE("query monotonicity in epsilon") {
  util::Rng rng(77);
  std::vector<core::Trajectory> trajs;
  for (int i = 0; i < 500; ++i)
    trajs.push_back(straight_traj("s" + std::to_string(i), "a0",
                                  {rng.uniform(-20, 20), rng.uniform(-20, 20)},
                                  rng.uniform(1.0, 3.0)));
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);
  for (int q = 0; q < 50; ++q) {
    const core::Point loc{rng.uniform(-20, 20), rng.uniform(-20, 20)};
    auto small = ids_of(db.query(loc, 0.7));
    auto large = ids_of(db.query(loc, 1.9));
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST_CASE("query result independent of insertion order") {
  util::Rng rng(5);
  std::vector<core::Trajectory> trajs;
  for (int i = 0; i < 200; ++i)
    trajs.push_back(straight_traj("s" + std::to_string(i), "a0",
                                  {rng.uniform(-10, 10), rng.uniform(-10, 10)}, 1.5));
  auto shuffled = trajs;
  rng.shuffle(shuffled);
  core::ExperimentConfig cfg;
  auto db1 = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);
  auto db2 = db::BehaviorDatabase::build(scenes_from_trajectories(shuffled), "r0", 2.0, cfg);
  for (int q = 0; q < 40; ++q) {
    const core::Point loc{rng.uniform(-10, 10), rng.uniform(-10, 10)};
    CHECK(ids_of(db1.query(loc, 1.0)) == ids_of(db2.query(loc, 1.0)));
  }
}

TEST_CASE("subsample keeps the nearest under the deterministic order") {
  std::vector<core::Trajectory> trajs;
  for (int i = 0; i < 40; ++i)
    trajs.push_back(straight_traj("s" + std::to_string(100 + i), "a0",
                                  {0.01 * (i + 1), 0}, 1.5));
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);
  auto bs = db.query({0, 0}, 1.0);
  REQUIRE(bs.size() == 40);

  auto capped = db::subsample(bs, 16);
  REQUIRE(capped.size() == 16);
  for (size_t k = 0; k < capped.size(); ++k) CHECK(capped.members[k] == bs.members[k]);

  auto small = db::subsample(bs, 64);
  CHECK(small.size() == 40);

  SUBCASE("equidistant ties broken by (scene_id, agent_id)") {
    std::vector<core::Trajectory> ties;
    ties.push_back(straight_traj("sB", "a0", {1, 0}, 1.5));
    ties.push_back(straight_traj("sA", "a1", {-1, 0}, 1.5));
    ties.push_back(straight_traj("sA", "a0", {0, 1}, 1.5));
    auto tdb = db::BehaviorDatabase::build(scenes_from_trajectories(ties), "r0", 2.0, cfg);
    auto tbs = tdb.query({0, 0}, 1.5);
    REQUIRE(tbs.size() == 3);
    CHECK(tbs.members[0]->scene_id == "sA");
    CHECK(tbs.members[0]->agent_id == "a0");
    CHECK(tbs.members[1]->agent_id == "a1");
    CHECK(tbs.members[2]->scene_id == "sB");
    auto two = db::subsample(tbs, 2);
    CHECK(two.members[1]->agent_id == "a1");
  }
}

TEST_CASE("db_stats: counts, mean speed, histogram recount") {
  core::ExperimentConfig cfg;
  auto empty = db::BehaviorDatabase::build(core::SceneSet{}, "r0", 2.0, cfg);
  auto es = empty.stats();
  CHECK(es.count == 0);
  CHECK(es.mean_speed == 0.0);
  CHECK(es.cell_histogram.empty());

  util::Rng rng(31);
  std::vector<core::Trajectory> trajs;
  for (int i = 0; i < 300; ++i)
    trajs.push_back(straight_traj("s" + std::to_string(i), "a0",
                                  {rng.uniform(-30, 30), rng.uniform(-30, 30)},
                                  rng.uniform(1.0, 2.5)));
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);
  auto s = db.stats();
  CHECK(s.count == db.total_count());
  size_t hist_total = 0;
  for (const auto& [cell, n] : s.cell_histogram) hist_total += n;
  CHECK(hist_total == s.count);
}

TEST_CASE("database persistence reproduces query results exactly") {
  util::Rng rng(404);
  std::vector<core::Trajectory> trajs;
  for (int i = 0; i < 400; ++i)
    trajs.push_back(straight_traj("s" + std::to_string(i), "a0",
                                  {rng.uniform(-25, 25), rng.uniform(-25, 25)},
                                  rng.uniform(1.0, 3.0)));
  core::ExperimentConfig cfg;
  auto db = db::BehaviorDatabase::build(scenes_from_trajectories(trajs), "r0", 2.0, cfg);

  test::TempDir dir("db_persist");
  db.save(dir.file("r0.db.csv"));
  auto reloaded = db::BehaviorDatabase::load(dir.file("r0.db.csv"));
  CHECK(reloaded.total_count() == db.total_count());
  CHECK(reloaded.cell_size() == db.cell_size());
  CHECK(reloaded.region_id() == db.region_id());
  for (int q = 0; q < 60; ++q) {
    const core::Point loc{rng.uniform(-25, 25), rng.uniform(-25, 25)};
    auto a = db.query(loc, 1.2);
    auto b = reloaded.query(loc, 1.2);
    REQUIRE(a.size() == b.size());
    for (size_t k = 0; k < a.members.size(); ++k) {
      CHECK(a.members[k]->scene_id == b.members[k]->scene_id);
      CHECK(a.members[k]->agent_id == b.members[k]->agent_id);
      CHECK(a.members[k]->points[0].x == b.members[k]->points[0].x);
    }
  }
}
