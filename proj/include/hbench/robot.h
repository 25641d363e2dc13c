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

#ifndef HBENCH_ROBOT_H_
#define HBENCH_ROBOT_H_

#include <string>
#include <string_view>
#include <vector>

#include "hbench/math.h"

namespace hbench {

struct ActuatorSpec {
  std::string name;
  double lower = -1.0;  // control range, radians in position mode
  double upper = 1.0;
  double torque_limit = 1.0;  // N m, used in torque mode
  bool hand = false;
};

// Coordinate bookkeeping for the humanoid. Generalized coordinates are laid
// out as [body | left hand | right hand]; the body starts with the floating
// base (x, y, z, qw, qx, qy, qz in positions, 6 velocities). The per-part
// coordinate counts are those declared by the robot description.
struct RobotModel {
  std::string name;
  bool has_hands = true;
  int body_nq = 26;
  int body_nv = 25;
  int hand_nq = 26;
  int hand_nv = 25;
  int body_actuators = 19;
  int hand_actuators = 21;
  std::vector<ActuatorSpec> actuators;

  int nq() const { return body_nq + (has_hands ? 2 * hand_nq : 0); }
  int nv() const { return body_nv + (has_hands ? 2 * hand_nv : 0); }
  int nu() const { return static_cast<int>(actuators.size()); }

  // Offsets of the first hand coordinate; only meaningful with hands.
  int left_hand_q() const { return body_nq; }
  int right_hand_q() const { return body_nq + hand_nq; }
  int left_hand_v() const { return body_nv; }
  int right_hand_v() const { return body_nv + hand_nv; }

  // Coordinate driven by actuator i.
  int actuated_q(int actuator) const;
  int actuated_v(int actuator) const;

  // Canonical standing configuration.
  std::vector<double> standing_qpos() const;
};

// Unitree H1 with two 21-actuator dexterous hands (61 actuators).
RobotModel h1_hand_model();

// Unitree H1 body only (19 actuators).
RobotModel h1_model();

// Robot configurations: full (61 actions, 151 robot observations), no_hands
// (hands removed from the model: 19 / 49), blocked (full model, hand
// commands fixed at zero: 19 / 151) and reduced (blocked, hand joints
// removed from the observation: 19 / 49).
enum class RobotVariant { kFull, kNoHands, kBlocked, kReduced };

std::string_view to_string(RobotVariant variant);
RobotVariant robot_variant_from_string(std::string_view name);
RobotModel robot_model(RobotVariant variant);

inline constexpr double kStandingPelvisHeight = 0.98;

// Reference points on the robot, offsets in the pelvis frame. The scripted
// backend uses these for its kinematics.
struct RobotLandmarks {
  Vec3 head{0.0, 0.0, 0.70};
  Vec3 imu{-0.04, 0.0, 0.32};
  Vec3 left_shoulder{0.0, 0.20, 0.45};
  Vec3 right_shoulder{0.0, -0.20, 0.45};
  double upper_arm = 0.3;
  double forearm = 0.3;
  Vec3 left_foot{0.0, 0.10, -0.93};
  Vec3 right_foot{0.0, -0.10, -0.93};
};

}  // namespace hbench

#endif  // HBENCH_ROBOT_H_
