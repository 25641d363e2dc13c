// Copyright 2026 The hbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hbench/error.h"
#include "hbench/hierarchy.h"
#include "hbench/rng.h"
#include "hbench/rollout.h"
#include "json.hpp"

namespace hbench {
namespace {

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST_CASE("zero actions on stand give identical summaries across runs") {
  RolloutConfig cfg;
  cfg.task = "stand";
  cfg.policy = "zeros";
  cfg.episodes = 3;
  cfg.seed = 5;
  const RolloutSummary a = run_rollouts(cfg);
  cfg.threads = 3;
  const RolloutSummary b = run_rollouts(cfg);
  CHECK(a.returns == b.returns);
  CHECK(a.lengths == b.lengths);
  CHECK(summary_json(a) == summary_json(b));
  CHECK(a.episodes == 3);
  CHECK(a.success_target == 800.0);
}

TEST_CASE("random actions score nothing on kitchen") {
  RolloutConfig cfg;
  cfg.task = "kitchen";
  cfg.policy = "random";
  cfg.episodes = 2;
  const RolloutSummary s = run_rollouts(cfg);
  CHECK(s.mean_return == 0.0);
  CHECK(s.subtask_histogram.at(0) == 2);
}

TEST_CASE("random actions stay below the walk target") {
  RolloutConfig cfg;
  cfg.task = "walk";
  cfg.policy = "random";
  cfg.episodes = 2;
  const RolloutSummary s = run_rollouts(cfg);
  CHECK(s.mean_return < s.success_target);
  CHECK(s.clamped_actions == 0);
  for (std::int64_t n : s.lengths) CHECK(n <= 1000);
}

TEST_CASE("traces embed the run config") {
  const auto dir = std::filesystem::temp_directory_path() / "hbench_rollout_test";
  std::filesystem::remove_all(dir);
  RolloutConfig cfg;
  cfg.task = "push";
  cfg.policy = "scripted:sine";
  cfg.episodes = 2;
  cfg.seed = 17;
  cfg.out = dir;
  const RolloutSummary s = run_rollouts(cfg);
  const auto lines = read_lines(dir / "trace.jsonl");
  REQUIRE(lines.size() == static_cast<std::size_t>(1 + s.lengths[0] + s.lengths[1] + 2));
  const auto header = nlohmann::json::parse(lines[0]);
  CHECK(header.at("type") == "config");
  CHECK(header.at("config").at("task") == "push");
  CHECK(header.at("config").at("seed") == 17);
  CHECK(header.at("config").at("policy") == "scripted:sine");
  CHECK(header.at("task_config").at("episode_cap") == 500);
  const auto first = nlohmann::json::parse(lines[1]);
  CHECK(first.at("type") == "step");
  CHECK(first.at("terms").contains("d_hand"));
  double ret = 0.0;
  for (std::int64_t k = 0; k < s.lengths[0]; ++k) {
    ret += nlohmann::json::parse(lines[1 + k]).at("reward").get<double>();
  }
  const auto ep = nlohmann::json::parse(lines[1 + s.lengths[0]]);
  CHECK(ep.at("type") == "episode");
  CHECK(ep.at("seed") == 17);
  CHECK(ep.at("return").get<double>() == doctest::Approx(ret).epsilon(1e-12));
  const auto summary = nlohmann::json::parse(read_lines(dir / "summary.json").at(0));
  CHECK(summary.at("returns").size() == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("unknown names are rejected with the valid choices") {
  RolloutConfig cfg;
  cfg.task = "fly";
  CHECK_THROWS_WITH_AS(run_rollouts(cfg), doctest::Contains("walk"), Error);
  cfg.task = "walk";
  cfg.policy = "greedy";
  CHECK_THROWS_WITH_AS(run_rollouts(cfg), doctest::Contains("random"), Error);
  cfg.policy = "zeros";
  cfg.episodes = 0;
  CHECK_THROWS_AS(run_rollouts(cfg), Error);
}

TEST_CASE("hierarchical rollouts load policy files") {
  const auto dir = std::filesystem::temp_directory_path() / "hbench_rollout_policies";
  std::filesystem::create_directories(dir);
  Rng rng(1);
  auto make = [&](int obs, int targets, int out) {
    MlpPolicy::Manifest m;
    m.observation_dim = obs;
    m.num_targets = targets;
    m.layers = {obs + 3 * targets, 16, out};
    std::vector<float> p(MlpPolicy::parameter_count(m.layers));
    for (float& v : p) v = static_cast<float>(rng.uniform(-0.2, 0.2));
    return MlpPolicy(m, p);
  };
  make(163, 1, 61).save(dir / "low.mlp");
  make(163, 0, 3).save(dir / "high.mlp");
  RolloutConfig cfg;
  cfg.task = "push";
  cfg.policy = "hierarchical:" + (dir / "low.mlp").string() + ":" + (dir / "high.mlp").string();
  cfg.episodes = 1;
  const RolloutSummary a = run_rollouts(cfg);
  CHECK(a.lengths[0] > 0);
  CHECK(a.returns == run_rollouts(cfg).returns);
  cfg.policy = "hierarchical:" + (dir / "low.mlp").string();
  CHECK_NOTHROW(run_rollouts(cfg));
  cfg.task = "walk";  // no clip box
  CHECK_THROWS_AS(run_rollouts(cfg), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("scripted-backend throughput is labeled synthetic") {
  const CollisionProfile profiles[] = {CollisionProfile::kFeetOnly, CollisionProfile::kFull};
  const FpsReport r = bench_fps("walk", {}, profiles, 200, 0);
  REQUIRE(r.results.size() == 2);
  for (const FpsResult& f : r.results) {
    CHECK(f.synthetic);
    CHECK(f.fps > 0.0);
  }
  CHECK_FALSE(r.ordering_checked);
  CHECK(fps_report_text(r).find("synthetic") != std::string::npos);
}

TEST_CASE("oracle diff text reports every task") {
  std::vector<OracleDiffReport> reports = {oracle_diff(find_task("walk"), 100, 1),
                                           oracle_diff(find_task("cube"), 100, 2)};
  const std::string text = oracle_diff_text(reports);
  CHECK(text.find("walk") != std::string::npos);
  CHECK(text.find("cube") != std::string::npos);
}

}  // namespace
}  // namespace hbench
