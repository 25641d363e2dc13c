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

#include "hbench/robot.h"

#include <string>

#include "hbench/error.h"

namespace hbench {

namespace {

struct Range {
  const char* name;
  double lower;
  double upper;
  double torque;
};

// H1 joint limits, actuator order of the robot description.
constexpr Range kBodyActuators[] = {
    {"left_hip_yaw", -0.43, 0.43, 200.0},       {"left_hip_roll", -0.43, 0.43, 200.0},
    {"left_hip_pitch", -3.14, 2.53, 200.0},     {"left_knee", -0.26, 2.05, 300.0},
    {"left_ankle", -0.87, 0.52, 40.0},         {"right_hip_yaw", -0.43, 0.43, 200.0},
    {"right_hip_roll", -0.43, 0.43, 200.0},     {"right_hip_pitch", -3.14, 2.53, 200.0},
    {"right_knee", -0.26, 2.05, 300.0},         {"right_ankle", -0.87, 0.52, 40.0},
    {"torso", -2.35, 2.35, 200.0},              {"left_shoulder_pitch", -2.87, 2.87, 40.0},
    {"left_shoulder_roll", -0.34, 3.11, 40.0}, {"left_shoulder_yaw", -1.3, 4.45, 18.0},
    {"left_elbow", -1.25, 2.61, 18.0},         {"right_shoulder_pitch", -2.87, 2.87, 40.0},
    {"right_shoulder_roll", -3.11, 0.34, 40.0}, {"right_shoulder_yaw", -4.45, 1.3, 18.0},
    {"right_elbow", -1.25, 2.61, 18.0},
};

constexpr Range kHandActuators[] = {
    {"wrist_j2", -0.524, 0.175, 2.0}, {"wrist_j1", -0.698, 0.489, 2.0},
    {"ff_j4", -0.349, 0.349, 2.0},    {"ff_j3", -0.262, 1.571, 2.0},
    {"ff_j1", 0.0, 1.571, 2.0},       {"ff_j0", 0.0, 3.1415, 2.0},
    {"mf_j4", -0.349, 0.349, 2.0},    {"mf_j3", -0.262, 1.571, 2.0},
    {"mf_j0", 0.0, 3.1415, 2.0},      {"rf_j4", -0.349, 0.349, 2.0},
    {"rf_j3", -0.262, 1.571, 2.0},    {"rf_j0", 0.0, 3.1415, 2.0},
    {"lf_j5", 0.0, 0.785, 2.0},       {"lf_j4", -0.349, 0.349, 2.0},
    {"lf_j3", -0.262, 1.571, 2.0},    {"lf_j0", 0.0, 3.1415, 2.0},
    {"th_j5", -1.047, 1.047, 2.0},    {"th_j4", 0.0, 1.222, 2.0},
    {"th_j3", -0.209, 0.209, 2.0},    {"th_j2", -0.698, 0.698, 2.0},
    {"th_j1", -0.262, 1.571, 2.0},
};

static_assert(std::size(kBodyActuators) == 19);
static_assert(std::size(kHandActuators) == 21);

RobotModel make_model(bool hands) {
  RobotModel model;
  model.name = hands ? "h1hand" : "h1";
  model.has_hands = hands;
  for (const Range& r : kBodyActuators) {
    model.actuators.push_back({r.name, r.lower, r.upper, r.torque, false});
  }
  if (hands) {
    for (const char* side : {"left_", "right_"}) {
      for (const Range& r : kHandActuators) {
        model.actuators.push_back(
            {std::string(side) + r.name, r.lower, r.upper, r.torque, true});
      }
    }
  }
  return model;
}

}  // namespace

int RobotModel::actuated_q(int actuator) const {
  if (actuator < body_actuators) return 7 + actuator;
  const int j = actuator - body_actuators;
  return j < hand_actuators ? left_hand_q() + j
                            : right_hand_q() + (j - hand_actuators);
}

int RobotModel::actuated_v(int actuator) const {
  if (actuator < body_actuators) return 6 + actuator;
  const int j = actuator - body_actuators;
  return j < hand_actuators ? left_hand_v() + j
                            : right_hand_v() + (j - hand_actuators);
}

std::vector<double> RobotModel::standing_qpos() const {
  std::vector<double> q(nq(), 0.0);
  q[2] = kStandingPelvisHeight;
  q[3] = 1.0;
  return q;
}

RobotModel h1_hand_model() { return make_model(true); }

RobotModel h1_model() { return make_model(false); }

std::string_view to_string(RobotVariant variant) {
  switch (variant) {
    case RobotVariant::kFull:
      return "full";
    case RobotVariant::kNoHands:
      return "no_hands";
    case RobotVariant::kBlocked:
      return "blocked";
    case RobotVariant::kReduced:
      return "reduced";
  }
  return "full";
}

RobotVariant robot_variant_from_string(std::string_view name) {
  if (name == "full") return RobotVariant::kFull;
  if (name == "no_hands") return RobotVariant::kNoHands;
  if (name == "blocked") return RobotVariant::kBlocked;
  if (name == "reduced") return RobotVariant::kReduced;
  throw Error("unknown robot variant '" + std::string(name) +
              "'; valid: full, no_hands, blocked, reduced");
}

RobotModel robot_model(RobotVariant variant) {
  return variant == RobotVariant::kNoHands ? h1_model() : h1_hand_model();
}

}  // namespace hbench
