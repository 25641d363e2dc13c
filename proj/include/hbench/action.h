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

#ifndef HBENCH_ACTION_H_
#define HBENCH_ACTION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "hbench/backend.h"
#include "hbench/robot.h"

namespace hbench {

// Affine map from normalized actions in [-1, 1]^dim to actuator commands.
// With blocked hands the policy drives only the body actuators and every
// hand command is held at zero.
struct ActionMap {
  int dim = 0;                 // policy action dimension (61 or 19)
  std::vector<double> lower;   // per model actuator
  std::vector<double> upper;
  ControlMode mode = ControlMode::kPosition;
  bool blocked_hands = false;

  int num_actuators() const { return static_cast<int>(lower.size()); }
};

ActionMap make_action_map(const RobotModel& robot, RobotVariant variant,
                          ControlMode mode = ControlMode::kPosition);

// Writes one command per model actuator into `out`. Entries with |a_i| > 1
// are clamped and counted in `*clamped` when given. Throws Error on a
// dimension mismatch or a non-finite entry.
void denormalize_action(std::span<const double> a, const ActionMap& map,
                        std::span<double> out, std::int64_t* clamped = nullptr);
std::vector<double> denormalize_action(std::span<const double> a,
                                       const ActionMap& map,
                                       std::int64_t* clamped = nullptr);

// Inverse of denormalize_action on the policy-driven entries.
std::vector<double> normalize_action(std::span<const double> commands,
                                     const ActionMap& map);

}  // namespace hbench

#endif  // HBENCH_ACTION_H_
