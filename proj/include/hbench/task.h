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

#ifndef HBENCH_TASK_H_
#define HBENCH_TASK_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbench/math.h"
#include "hbench/tolerance.h"

namespace hbench {

enum class TaskId {
  kWalk,
  kStand,
  kRun,
  kReach,
  kHurdle,
  kCrawl,
  kMaze,
  kSitSimple,
  kSitHard,
  kBalanceSimple,
  kBalanceHard,
  kStair,
  kSlide,
  kPole,
  kPush,
  kCabinet,
  kHighbar,
  kDoor,
  kTruck,
  kCube,
  kBookshelfSimple,
  kBookshelfHard,
  kBasketball,
  kWindow,
  kSpoon,
  kKitchen,
  kPackage,
  kPowerlift,
  kRoom,
  kInsertSmall,
  kInsertNormal,
};

inline constexpr int kNumTasks = 31;

// Named numeric constants. Scalars are stored as one-element vectors.
class ParamTable {
 public:
  void set(std::string name, std::vector<double> value);
  void set(std::string name, double value) { set(std::move(name), std::vector<double>{value}); }

  bool contains(std::string_view name) const;
  // Throws Error("unknown parameter: <name>") when absent.
  double operator()(std::string_view name) const;
  const std::vector<double>& vec(std::string_view name) const;
  Bounds bounds(std::string_view prefix) const;  // <prefix>.lower/.upper

  const std::map<std::string, std::vector<double>, std::less<>>& entries() const {
    return values_;
  }

  friend bool operator==(const ParamTable&, const ParamTable&) = default;

 private:
  std::map<std::string, std::vector<double>, std::less<>> values_;
};

// Static definition of one benchmark task.
struct TaskSpec {
  TaskId id = TaskId::kWalk;
  std::string name;
  int episode_cap = 1000;
  double success_target = 0.0;  // return marking qualitative success
  bool manipulation = false;
  ParamTable params;
  ToleranceShape default_shape;
  std::map<std::string, ToleranceShape, std::less<>> shape_overrides;

  // Shape used by a given reward term.
  ToleranceShape shape(std::string_view term) const;
  double param(std::string_view name) const { return params(name); }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// Built-in definitions of all task variants, in TaskId order.
std::span<const TaskSpec> all_tasks();
const TaskSpec& builtin_task(TaskId id);
// Throws Error listing the valid names for an unknown task.
const TaskSpec& find_task(std::string_view name);
std::vector<std::string> task_names();

// Staged tasks need EpisodeState.stage to pick their reward.
bool is_staged(TaskId id);

// Scene content each task reads.
struct SceneRequirements {
  std::vector<std::string> bodies;
  std::vector<std::string> sites;
  std::vector<std::string> aux_joints;
  std::vector<std::string> geom_groups;
};
SceneRequirements scene_requirements(const TaskSpec& task);

// Per-task declarative configuration. The JSON document holds the task name,
// episode cap, success target, parameters (infinities as "inf"/"-inf") and
// optional tolerance shape overrides.
std::string task_config_json(const TaskSpec& task);
TaskSpec parse_task_config(std::string_view json_text);
TaskSpec load_task_config(const std::filesystem::path& path);
// Loads <dir>/<name>.json when present, else the built-in definition.
TaskSpec resolve_task(std::string_view name, const std::filesystem::path& config_dir);

// Names of list-like scene content derived from task parameters.
std::vector<std::string> truck_packages(const TaskSpec& task);
std::vector<std::string> room_objects(const TaskSpec& task);
std::vector<std::string> bookshelf_objects(const TaskSpec& task);
std::vector<std::string> bookshelf_destinations(const TaskSpec& task);

}  // namespace hbench

#endif  // HBENCH_TASK_H_
