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

#include "hbench/action.h"

#include <cmath>
#include <string>

#include "hbench/error.h"

namespace hbench {

ActionMap make_action_map(const RobotModel& robot, RobotVariant variant,
                          ControlMode mode) {
  ActionMap map;
  map.mode = mode;
  map.blocked_hands = robot.has_hands && (variant == RobotVariant::kBlocked ||
                                          variant == RobotVariant::kReduced);
  for (const ActuatorSpec& act : robot.actuators) {
    if (mode == ControlMode::kPosition) {
      map.lower.push_back(act.lower);
      map.upper.push_back(act.upper);
    } else {
      map.lower.push_back(-act.torque_limit);
      map.upper.push_back(act.torque_limit);
    }
    if (!(map.lower.back() < map.upper.back())) {
      throw Error("empty actuator range: " + act.name);
    }
  }
  map.dim = map.blocked_hands ? robot.body_actuators : robot.nu();
  return map;
}

void denormalize_action(std::span<const double> a, const ActionMap& map,
                        std::span<double> out, std::int64_t* clamped) {
  if (static_cast<int>(a.size()) != map.dim) {
    throw Error("action dimension mismatch: got " + std::to_string(a.size()) +
                ", expected " + std::to_string(map.dim));
  }
  if (static_cast<int>(out.size()) != map.num_actuators()) {
    throw Error("command buffer has wrong size");
  }
  for (int i = 0; i < map.num_actuators(); ++i) {
    if (i >= map.dim) {
      out[i] = 0.0;  // blocked hand: zero actuation
      continue;
    }
    double ai = a[i];
    if (!std::isfinite(ai)) throw Error("non-finite action entry " + std::to_string(i));
    if (ai > 1.0 || ai < -1.0) {
      ai = ai > 1.0 ? 1.0 : -1.0;
      if (clamped) ++*clamped;
    }
    // Exact at both endpoints and at the midpoint.
    out[i] = 0.5 * ((1.0 - ai) * map.lower[i] + (1.0 + ai) * map.upper[i]);
  }
}

std::vector<double> denormalize_action(std::span<const double> a,
                                       const ActionMap& map,
                                       std::int64_t* clamped) {
  std::vector<double> out(map.num_actuators());
  denormalize_action(a, map, out, clamped);
  return out;
}

std::vector<double> normalize_action(std::span<const double> commands,
                                     const ActionMap& map) {
  if (static_cast<int>(commands.size()) != map.num_actuators()) {
    throw Error("command dimension mismatch");
  }
  std::vector<double> a(map.dim);
  for (int i = 0; i < map.dim; ++i) {
    const double mid = 0.5 * (map.upper[i] + map.lower[i]);
    const double half = 0.5 * (map.upper[i] - map.lower[i]);
    a[i] = (commands[i] - mid) / half;
  }
  return a;
}

}  // namespace hbench
