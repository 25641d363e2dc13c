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


#ifndef HBENCH_ROLLOUT_H_
#define HBENCH_ROLLOUT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbench/environment.h"

namespace hbench {

// Action source for rollouts.
class RolloutPolicy {
 public:
  virtual ~RolloutPolicy() = default;
  virtual void reset(std::uint64_t seed) { (void)seed; }
  virtual void act(std::span<const double> observation, std::span<double> action) = 0;
};

// Policy names: zeros, random, scripted:hold, scripted:sine,
// hierarchical:<low.mlp>[:<high.mlp>]. Throws Error listing the valid set.
std::unique_ptr<RolloutPolicy> make_policy(const std::string& spec, const Environment& env);
std::vector<std::string> policy_names();

struct RolloutConfig {
  std::string task = "stand";
  std::string policy = "zeros";
  int episodes = 1;
  std::uint64_t seed = 0;
  EnvOptions env;
  std::filesystem::path config_dir;  // per-task JSON overrides
  std::filesystem::path out;         // trace directory; empty disables traces
  int threads = 1;
};

std::string rollout_config_json(const RolloutConfig& cfg);

struct RolloutSummary {
  std::string task;
  std::string policy;
  int episodes = 0;
  double success_target = 0.0;
  std::vector<double> returns;
  std::vector<std::int64_t> lengths;
  double mean_return = 0.0;
  double std_return = 0.0;  // population
  std::map<std::string, int> termination_reasons;
  std::map<int, int> subtask_histogram;  // completed subtasks -> episodes
  std::int64_t clamped_actions = 0;
  double seconds = 0.0;
};

// Runs `episodes` episodes with seeds seed, seed + 1, ... and writes
// trace.jsonl (config header, one line per step and per episode) and
// summary.json under cfg.out when set. Results are merged by episode index.
RolloutSummary run_rollouts(const RolloutConfig& cfg);

std::string summary_json(const RolloutSummary& summary);
std::string summary_table(const RolloutSummary& summary);

struct FpsResult {
  std::string profile;
  std::int64_t steps = 0;
  double seconds = 0.0;
  double fps = 0.0;  // control steps per second
  bool synthetic = false;
};

struct FpsReport {
  std::vector<FpsResult> results;
  bool ordering_checked = false;  // only for physics engines
  bool ordering_holds = false;    // feet_only > simplified > no_hands > full
};

FpsReport bench_fps(const std::string& task, const EnvOptions& env,
                    std::span<const CollisionProfile> profiles, std::int64_t steps,
                    std::uint64_t seed);
std::string fps_report_text(const FpsReport& report);

struct OracleDiffReport {
  std::string task;
  int states = 0;
  double max_dense = 0.0;
  double max_sparse = 0.0;
  std::map<std::string, double> max_term;  // terms both sides report
  int termination_mismatches = 0;
  double seconds = 0.0;

  double max_error() const;
};

// Compares the reward kernel for `task` against the reference transcription
// on fuzzed states. Pass a modified TaskSpec to exercise the harness.
OracleDiffReport oracle_diff(const TaskSpec& task, int states, std::uint64_t seed);
std::string oracle_diff_text(const std::vector<OracleDiffReport>& reports);

}  // namespace hbench

#endif  // HBENCH_ROLLOUT_H_
