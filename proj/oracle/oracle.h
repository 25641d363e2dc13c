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

// Reference transcription of the task rewards and termination rules, kept
// apart from the kernel. It hard-codes the published constants, carries its
// own tolerance function, and reads only scene-dependent values (maze
// course, truck regions, kitchen goals, pot extents, object counts) from
// the task definition. Used by tests and by `hbench --oracle-diff`.

#ifndef HBENCH_ORACLE_ORACLE_H_
#define HBENCH_ORACLE_ORACLE_H_

#include <map>
#include <span>
#include <string>

#include "hbench/episode.h"
#include "hbench/task.h"
#include "hbench/world_state.h"

namespace hbench::oracle {

// Gaussian tolerance with 0.1 at one margin away.
double tol(double x, double lower, double upper, double margin);

struct Reward {
  double dense = 0.0;
  double sparse = 0.0;
  std::map<std::string, double> terms;  // a subset of the kernel's names
};

Reward reward(const TaskSpec& task, const WorldState& state,
              std::span<const double> u, const EpisodeState& episode);

TerminationStatus termination(const TaskSpec& task, const WorldState& state,
                              const EpisodeState& episode);

}  // namespace hbench::oracle

#endif  // HBENCH_ORACLE_ORACLE_H_
