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


#include "hbench/backend.h"

#include <string>

#include "hbench/error.h"
#include "json.hpp"

namespace hbench {

std::string_view to_string(CollisionProfile profile) {
  switch (profile) {
    case CollisionProfile::kFull:
      return "full";
    case CollisionProfile::kSimplifiedBody:
      return "simplified_body";
    case CollisionProfile::kFeetOnly:
      return "feet_only";
    case CollisionProfile::kNoHands:
      return "no_hands";
  }
  return "full";
}

CollisionProfile collision_profile_from_string(std::string_view name) {
  if (name == "full" || name == "default") return CollisionProfile::kFull;
  if (name == "simplified_body") return CollisionProfile::kSimplifiedBody;
  if (name == "feet_only") return CollisionProfile::kFeetOnly;
  if (name == "no_hands") return CollisionProfile::kNoHands;
  throw Error("unknown collision profile '" + std::string(name) +
              "'; valid: full, simplified_body, feet_only, no_hands");
}

std::string_view to_string(ControlMode mode) {
  return mode == ControlMode::kPosition ? "position" : "torque";
}

ControlMode control_mode_from_string(std::string_view name) {
  if (name == "position") return ControlMode::kPosition;
  if (name == "torque") return ControlMode::kTorque;
  throw Error("unknown control mode '" + std::string(name) + "'; valid: position, torque");
}

std::string capabilities_json(const BackendCapabilities& caps) {
  nlohmann::ordered_json j;
  j["engine"] = caps.engine;
  j["synthetic"] = caps.synthetic;
  j["substep_dt"] = caps.substep_dt;
  j["substeps_per_control"] = caps.substeps_per_control;
  j["control_period"] = caps.control_period();
  j["collision_profile"] = std::string(to_string(caps.collision_profile));
  j["control_mode"] = std::string(to_string(caps.control_mode));
  j["bodies"] = caps.bodies;
  j["sites"] = caps.sites;
  return j.dump();
}

}  // namespace hbench
