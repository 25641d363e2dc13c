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


#ifndef HBENCH_ENVIRONMENT_H_
#define HBENCH_ENVIRONMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbench/action.h"
#include "hbench/backend.h"
#include "hbench/episode.h"
#include "hbench/observation.h"
#include "hbench/reward.h"
#include "hbench/robot.h"
#include "hbench/task.h"

namespace hbench {

struct EnvOptions {
  std::string backend = "scripted";  // "scripted" or "mujoco"
  RobotVariant robot = RobotVariant::kFull;
  CollisionProfile collision_profile = CollisionProfile::kFull;
  ControlMode control_mode = ControlMode::kPosition;
  std::filesystem::path scene_dir;  // scene files for engine backends
};

// Creates a backend for `task`. Throws Error for an unknown or unbuilt
// backend name.
std::unique_ptr<PhysicsBackend> make_backend(const TaskSpec& task,
                                             const EnvOptions& options);

struct StepResult {
  std::vector<double> observation;
  RewardBreakdown reward;
  TerminationStatus termination;
  std::int64_t clamped = 0;  // action entries clamped on this step
};

// One episode worker: backend, task machine, reward kernel and observation
// assembly. Step order: map the action, advance the physics one control
// step, update stages, compute the reward, respawn reach targets, check
// termination, assemble the observation.
class Environment {
 public:
  explicit Environment(TaskSpec task, EnvOptions options = {},
                       std::unique_ptr<PhysicsBackend> backend = nullptr);

  std::vector<double> reset(std::uint64_t seed);
  // Throws Error when called before reset or after termination.
  StepResult step(std::span<const double> action);

  const TaskSpec& task() const { return task_; }
  const EnvOptions& options() const { return options_; }
  const ObservationLayout& observation_layout() const { return obs_layout_; }
  const ActionMap& action_map() const { return action_map_; }
  int observation_dim() const { return obs_layout_.total_dim; }
  int action_dim() const { return action_map_.dim; }
  std::string manifest_json() const;

  PhysicsBackend& backend() { return *backend_; }
  const WorldState& state() const { return state_; }
  const EpisodeState& episode() const { return episode_; }
  bool needs_reset() const { return needs_reset_; }
  std::int64_t clamped_total() const { return clamped_total_; }

 private:
  TaskSpec task_;
  EnvOptions options_;
  std::unique_ptr<PhysicsBackend> backend_;
  ObservationLayout obs_layout_;
  ActionMap action_map_;
  WorldState state_;
  EpisodeState episode_;
  std::vector<double> commands_;
  std::vector<double> clipped_;
  bool needs_reset_ = true;
  std::int64_t clamped_total_ = 0;
};

}  // namespace hbench

#endif  // HBENCH_ENVIRONMENT_H_
