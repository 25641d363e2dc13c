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

#ifndef HBENCH_EPISODE_H_
#define HBENCH_EPISODE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hbench/backend.h"
#include "hbench/math.h"
#include "hbench/rng.h"
#include "hbench/task.h"
#include "hbench/world_state.h"

namespace hbench {

enum class TerminationReason : std::uint8_t {
  kNone = 0,
  kTimeout = 1,
  kFailureHeight = 2,
  kFailureCollision = 3,
  kSuccess = 4,
  kObjectDropped = 5,
};

std::string_view to_string(TerminationReason reason);

struct TerminationStatus {
  bool terminated = false;
  TerminationReason reason = TerminationReason::kNone;

  friend bool operator==(const TerminationStatus&,
                         const TerminationStatus&) = default;
};

enum class PackageCategory : std::uint8_t { kTruck, kPicked, kTable };

// Basketball stages.
inline constexpr int kStageCatch = 0;
inline constexpr int kStageThrow = 1;

// Mutable per-episode data. Owned by one worker at a time.
struct EpisodeState {
  std::uint64_t seed = 0;
  std::int64_t step_index = 0;
  // Current stage of staged tasks: cabinet subtask (0..4), bookshelf
  // subtask (0..n), maze checkpoint, basketball catch/throw. -1 otherwise.
  int stage = -1;
  std::vector<int> completed_subtasks;  // in completion order
  int checkpoint_index = 0;
  Rng rng;
  double sparse_accumulated = 0.0;
  double step_bonus = 0.0;  // sparse bonus earned on the latest step
  std::map<std::string, Vec3, std::less<>> target_points;
  Quat target_quat;
  std::vector<int> subtask_objects;       // bookshelf object per subtask
  std::vector<int> subtask_destinations;  // bookshelf destination per subtask
  std::vector<PackageCategory> packages;  // truck
  bool success = false;
  int targets_reached = 0;  // reach with respawning targets

  friend bool operator==(const EpisodeState&, const EpisodeState&) = default;

  // Throws Error("missing target: <name>").
  const Vec3& target(std::string_view name) const;
};

// Names the task reads that the layout lacks ("body pelvis", ...).
std::vector<std::string> missing_scene_content(const TaskSpec& task,
                                               const SceneLayout& layout);

// Puts the backend scene in the task's initial configuration for `seed` and
// returns the matching episode state. Throws Error listing missing scene
// content.
EpisodeState reset(const TaskSpec& task, std::uint64_t seed,
                   PhysicsBackend& backend);

// Cap, failure and success predicates. Success outranks failure, failure
// outranks the cap.
TerminationStatus check_termination(const TaskSpec& task,
                                    const WorldState& state,
                                    const EpisodeState& episode);

struct StageUpdate {
  EpisodeState episode;
  double bonus = 0.0;
};

// Evaluates subtask/checkpoint/stage predicates on the post-step state.
// The returned episode carries step_bonus == bonus and the updated
// sparse_accumulated.
StageUpdate advance_task_stage(const TaskSpec& task, const WorldState& state,
                               const EpisodeState& episode);

// Reach with respawning targets: draws a new target once the left hand is
// within the configured distance, and injects force perturbations when
// enabled. No-op for other tasks or when respawning is off. Returns true
// when a new target was drawn.
bool respawn_reach_target(const TaskSpec& task, const WorldState& state,
                          EpisodeState& episode, PhysicsBackend* backend);

}  // namespace hbench

#endif  // HBENCH_EPISODE_H_
