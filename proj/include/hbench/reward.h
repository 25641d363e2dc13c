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

#ifndef HBENCH_REWARD_H_
#define HBENCH_REWARD_H_

#include <map>
#include <span>
#include <string>

#include "hbench/episode.h"
#include "hbench/task.h"
#include "hbench/world_state.h"

namespace hbench {

struct RewardBreakdown {
  double dense = 0.0;
  double sparse = 0.0;
  double total = 0.0;  // dense + sparse
  std::map<std::string, double> terms;

  friend bool operator==(const RewardBreakdown&,
                         const RewardBreakdown&) = default;
};

// Control effort term over normalized actions, in [0.8, 1]. Throws on an
// empty action.
double effort_term(std::span<const double> u, double margin = 10.0,
                   const ToleranceShape& shape = {});
double effort_term(const TaskSpec& task, std::span<const double> u);

struct PostureTerms {
  double height = 0.0;
  double upright = 0.0;
  double stand = 0.0;
  double effort = 0.0;
  double stable = 0.0;
  double still = 0.0;
};

// Shared posture terms; constants come from the task ("height",
// "upright", "effort.margin", "still.margin").
PostureTerms posture_terms(const TaskSpec& task, const WorldState& state,
                           std::span<const double> u);
// Same with the default constants.
PostureTerms posture_terms(const WorldState& state, std::span<const double> u);

// Dense reward for the task plus the episode's sparse bonus for this step.
// `action` is the normalized action vector. Throws Error when a staged task
// has no stage, or when the state lacks something the task reads.
RewardBreakdown compute_reward(const TaskSpec& task, const WorldState& state,
                               std::span<const double> action,
                               const EpisodeState& episode);

}  // namespace hbench

#endif  // HBENCH_REWARD_H_
