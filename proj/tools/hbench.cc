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


// Command-line driver: rollouts, traces, the environment server, throughput
// benchmarks and oracle diffs.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hbench/error.h"
#include "hbench/rollout.h"
#include "hbench/server.h"

namespace {

constexpr double kOracleTolerance = 1e-9;

}  // namespace

int main(int argc, char** argv) {
  using namespace hbench;
  CLI::App app{"Humanoid task-suite engine: rollouts, server, benchmarks."};
  app.option_defaults()->always_capture_default();

  RolloutConfig cfg;
  std::string robot = "full";
  std::string profile = "full";
  std::string control = "position";
  std::string config_dir;
  std::string out;
  std::string dump_configs;
  bool serve = false;
  bool fps = false;
  bool diff = false;
  bool list = false;
  bool manifest = false;
  bool json = false;
  int states = 10000;
  long long bench_steps = 2000;
  std::string host = "127.0.0.1";
  int port = 5555;
  int n_envs = 1;
  int max_connections = -1;

  app.add_option("--task", cfg.task, "Task name, or 'all' with --oracle-diff")
      ->envname("HBENCH_TASK");
  app.add_option("--policy", cfg.policy,
                 "zeros | random | scripted:hold | scripted:sine | "
                 "hierarchical:<low.mlp>[:<high.mlp>]");
  app.add_option("--episodes", cfg.episodes, "Episodes to run")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Base seed")->envname("HBENCH_SEED");
  app.add_option("--backend", cfg.env.backend, "scripted | mujoco")->envname("HBENCH_BACKEND");
  app.add_option("--collision-profile", profile, "full | simplified_body | feet_only | no_hands")
      ->envname("HBENCH_COLLISION_PROFILE");
  app.add_option("--robot", robot, "full | no_hands | blocked | reduced");
  app.add_option("--control", control, "position | torque");
  app.add_option("--scene-dir", cfg.env.scene_dir, "Scene files for engine backends")
      ->envname("HBENCH_SCENE_DIR");
  app.add_option("--config-dir", config_dir, "Directory of per-task JSON configs");
  app.add_option("--out", out, "Trace output directory");
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--json", json, "Print the summary as JSON");
  app.add_flag("--serve", serve, "Run the environment server");
  app.add_option("--host", host, "Server listen address")->envname("HBENCH_HOST");
  app.add_option("--port", port, "Server port (0 picks one)")->envname("HBENCH_PORT");
  app.add_option("--n-envs", n_envs, "Environments per connection")
      ->envname("HBENCH_N_ENVS")
      ->check(CLI::PositiveNumber);
  app.add_option("--max-connections", max_connections, "Exit after this many connections");
  app.add_flag("--bench-fps", fps, "Measure steps per second per collision profile");
  app.add_option("--bench-steps", bench_steps, "Steps per profile for --bench-fps");
  app.add_flag("--oracle-diff", diff, "Compare the reward kernel with the reference");
  app.add_option("--states", states, "Fuzzed states per task for --oracle-diff");
  app.add_flag("--list-tasks", list, "Print task names");
  app.add_flag("--manifest", manifest, "Print the observation/action manifest");
  app.add_option("--dump-configs", dump_configs,
                 "Write the built-in task configs as JSON files into this directory");
  CLI11_PARSE(app, argc, argv);

  try {
    cfg.env.robot = robot_variant_from_string(robot);
    cfg.env.collision_profile = collision_profile_from_string(profile);
    cfg.env.control_mode = control_mode_from_string(control);
    cfg.config_dir = config_dir;
    cfg.out = out;

    if (!dump_configs.empty()) {
      std::filesystem::create_directories(dump_configs);
      for (const TaskSpec& t : all_tasks()) {
        const auto path = std::filesystem::path(dump_configs) / (t.name + ".json");
        std::ofstream f(path);
        if (!f) throw Error("cannot write " + path.string());
        f << task_config_json(t);
      }
      return 0;
    }
    if (list) {
      for (const std::string& name : task_names()) std::cout << name << '\n';
      return 0;
    }
    if (diff) {
      std::vector<OracleDiffReport> reports;
      if (cfg.task == "all") {
        for (const TaskSpec& t : all_tasks()) reports.push_back(oracle_diff(t, states, cfg.seed));
      } else {
        reports.push_back(oracle_diff(resolve_task(cfg.task, cfg.config_dir), states, cfg.seed));
      }
      std::cout << oracle_diff_text(reports);
      for (const OracleDiffReport& r : reports) {
        if (r.max_error() >= kOracleTolerance || r.termination_mismatches > 0) return 1;
      }
      return 0;
    }
    const TaskSpec task = resolve_task(cfg.task, cfg.config_dir);
    if (manifest) {
      Environment env(task, cfg.env);
      std::cout << env.manifest_json() << '\n';
      return 0;
    }
    if (fps) {
      const CollisionProfile profiles[] = {CollisionProfile::kFeetOnly,
                                           CollisionProfile::kSimplifiedBody,
                                           CollisionProfile::kNoHands, CollisionProfile::kFull};
      const FpsReport report = bench_fps(task.name, cfg.env, profiles, bench_steps, cfg.seed);
      std::cout << fps_report_text(report);
      return report.ordering_checked && !report.ordering_holds ? 1 : 0;
    }
    if (serve) {
      SessionOptions so;
      so.num_envs = n_envs;
      so.num_threads = cfg.threads;
      so.base_seed = cfg.seed;
      const EnvOptions env = cfg.env;
      ServerOptions opts;
      opts.host = host;
      opts.port = port;
      opts.max_connections = max_connections;
      TcpServer server([=] { return std::make_unique<Session>(task, env, so); }, opts);
      server.serve();
      return 0;
    }
    const RolloutSummary summary = run_rollouts(cfg);
    std::cout << (json ? summary_json(summary) + "\n" : summary_table(summary));
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
