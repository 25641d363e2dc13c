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


#ifndef HBENCH_FUZZ_H_
#define HBENCH_FUZZ_H_

#include <memory>
#include <vector>

#include "hbench/episode.h"
#include "hbench/rng.h"
#include "hbench/task.h"
#include "hbench/world_state.h"

namespace hbench {

// Random but valid snapshot for a scene: unit quaternions, finite values,
// contacts between random geom pairs.
WorldState fuzz_world_state(const std::shared_ptr<const SceneLayout>& layout, Rng& rng);

// Random episode bookkeeping consistent with the task: stage in range,
// subtask permutations, package categories, targets and a step bonus.
EpisodeState fuzz_episode(const TaskSpec& task, Rng& rng);

// Normalized action with entries in [-1, 1].
std::vector<double> fuzz_action(int dim, Rng& rng);

}  // namespace hbench

#endif  // HBENCH_FUZZ_H_
