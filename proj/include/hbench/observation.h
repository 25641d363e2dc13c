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

#ifndef HBENCH_OBSERVATION_H_
#define HBENCH_OBSERVATION_H_

#include <span>
#include <string>
#include <vector>

#include "hbench/action.h"
#include "hbench/episode.h"
#include "hbench/robot.h"
#include "hbench/task.h"
#include "hbench/world_state.h"

namespace hbench {

// Where a segment's values come from.
enum class SegmentKind {
  kRobotQpos,       // robot generalized positions without base x, y
  kRobotQvel,       // robot generalized velocities
  kRobotBodyQpos,   // body part only (hands omitted)
  kRobotBodyQvel,
  kPointPos,        // site or body origin, 3
  kBodyQuat,        // 4
  kBodyVel,         // world-frame linear velocity, 3
  kAuxPos,          // 1
  kAuxVel,          // 1
  kTarget,          // episode target point, 3
  kTargetQuat,      // episode target orientation, 4
  kSpoonTarget,     // circular spoon target for the current step, 3
  kSubtaskIndex,    // index of the next subtask, 1
};

struct ObservationSegment {
  std::string name;    // e.g. "box_pos"
  std::string source;  // e.g. "body:box.pos"
  SegmentKind kind = SegmentKind::kRobotQpos;
  std::string ref;     // body/site/joint/target name
  int offset = 0;
  int length = 0;
};

struct ObservationLayout {
  std::vector<ObservationSegment> segments;
  int total_dim = 0;
};

// Robot joints first, then the task's segments. All task-object
// quantities are in the world frame.
ObservationLayout observation_layout(const TaskSpec& task, RobotVariant variant);

// Throws Error naming the segment when its source is absent.
void assemble_observation(const WorldState& state, const TaskSpec& task,
                          const EpisodeState& episode,
                          const ObservationLayout& layout, std::span<double> out);
std::vector<double> assemble_observation(const WorldState& state,
                                         const TaskSpec& task,
                                         const EpisodeState& episode,
                                         const ObservationLayout& layout);

// Machine-readable description of the observation and action contract.
std::string layout_manifest_json(const TaskSpec& task, RobotVariant variant,
                                 const ObservationLayout& layout,
                                 const ActionMap& actions);

}  // namespace hbench

#endif  // HBENCH_OBSERVATION_H_
