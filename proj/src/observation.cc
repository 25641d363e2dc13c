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

#include "hbench/observation.h"

#include <cmath>
#include <numbers>
#include <string>

#include "hbench/error.h"
#include "json.hpp"

namespace hbench {

namespace {

int kind_length(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::kPointPos:
    case SegmentKind::kBodyVel:
    case SegmentKind::kTarget:
    case SegmentKind::kSpoonTarget:
      return 3;
    case SegmentKind::kBodyQuat:
    case SegmentKind::kTargetQuat:
      return 4;
    case SegmentKind::kAuxPos:
    case SegmentKind::kAuxVel:
    case SegmentKind::kSubtaskIndex:
      return 1;
    default:
      return 0;
  }
}

std::string source_of(SegmentKind kind, const std::string& ref) {
  switch (kind) {
    case SegmentKind::kRobotQpos:
      return "robot.qpos[2:]";
    case SegmentKind::kRobotQvel:
      return "robot.qvel";
    case SegmentKind::kRobotBodyQpos:
      return "robot.body_qpos[2:]";
    case SegmentKind::kRobotBodyQvel:
      return "robot.body_qvel";
    case SegmentKind::kPointPos:
      return "point:" + ref + ".pos";
    case SegmentKind::kBodyQuat:
      return "body:" + ref + ".quat";
    case SegmentKind::kBodyVel:
      return "body:" + ref + ".linvel";
    case SegmentKind::kAuxPos:
      return "joint:" + ref + ".pos";
    case SegmentKind::kAuxVel:
      return "joint:" + ref + ".vel";
    case SegmentKind::kTarget:
      return "target:" + ref;
    case SegmentKind::kTargetQuat:
      return "target:" + ref + ".quat";
    case SegmentKind::kSpoonTarget:
      return "target:spoon_circle";
    case SegmentKind::kSubtaskIndex:
      return "episode.stage";
  }
  return "";
}

class Builder {
 public:
  void add(std::string name, SegmentKind kind, std::string ref = "", int length = 0) {
    ObservationSegment seg;
    seg.name = std::move(name);
    seg.kind = kind;
    seg.ref = std::move(ref);
    seg.source = source_of(kind, seg.ref);
    seg.length = length > 0 ? length : kind_length(kind);
    seg.offset = layout_.total_dim;
    layout_.total_dim += seg.length;
    layout_.segments.push_back(std::move(seg));
  }
  void pos(const std::string& ref) { add(ref + "_pos", SegmentKind::kPointPos, ref); }
  void pos_vel(const std::string& body) {
    pos(body);
    add(body + "_vel", SegmentKind::kBodyVel, body);
  }
  // Position, orientation and velocity: 10 values.
  void pose_vel(const std::string& body) {
    pos(body);
    add(body + "_quat", SegmentKind::kBodyQuat, body);
    add(body + "_vel", SegmentKind::kBodyVel, body);
  }
  void joint(const std::string& name) {
    add(name + "_qpos", SegmentKind::kAuxPos, name);
    add(name + "_qvel", SegmentKind::kAuxVel, name);
  }
  ObservationLayout take() { return std::move(layout_); }

 private:
  ObservationLayout layout_;
};

}  // namespace

ObservationLayout observation_layout(const TaskSpec& task, RobotVariant variant) {
  const RobotModel robot = robot_model(variant);
  Builder b;
  if (variant == RobotVariant::kReduced) {
    b.add("robot_qpos", SegmentKind::kRobotBodyQpos, "", robot.body_nq - 2);
    b.add("robot_qvel", SegmentKind::kRobotBodyQvel, "", robot.body_nv);
  } else {
    b.add("robot_qpos", SegmentKind::kRobotQpos, "", robot.nq() - 2);
    b.add("robot_qvel", SegmentKind::kRobotQvel, "", robot.nv());
  }

  switch (task.id) {
    case TaskId::kReach:
      b.pos("left_hand");
      b.add("target_pos", SegmentKind::kTarget, "reach");
      break;
    case TaskId::kSitHard:
      b.pos("chair");
      b.add("chair_quat", SegmentKind::kBodyQuat, "chair");
      break;
    case TaskId::kBalanceSimple:
      b.pose_vel("board");
      break;
    case TaskId::kBalanceHard:
      b.pose_vel("board");
      b.pose_vel("pivot");
      break;
    case TaskId::kPush:
      b.pos("left_hand");
      b.add("destination_pos", SegmentKind::kTarget, "destination");
      b.pos_vel("box");
      break;
    case TaskId::kCabinet:
      for (const char* j : {"cabinet_slide", "drawer", "hinge_left", "hinge_right", "pullup"}) {
        b.add(std::string(j) + "_qpos", SegmentKind::kAuxPos, j);
      }
      for (const char* j : {"cabinet_slide", "drawer", "hinge_left", "hinge_right", "pullup"}) {
        b.add(std::string(j) + "_qvel", SegmentKind::kAuxVel, j);
      }
      b.pose_vel("cube");
      break;
    case TaskId::kDoor:
      b.add("door_hinge_qpos", SegmentKind::kAuxPos, "door_hinge");
      b.add("door_hatch_qpos", SegmentKind::kAuxPos, "door_hatch");
      b.add("door_hinge_qvel", SegmentKind::kAuxVel, "door_hinge");
      b.add("door_hatch_qvel", SegmentKind::kAuxVel, "door_hatch");
      break;
    case TaskId::kTruck:
      for (const std::string& name : truck_packages(task)) b.pos_vel(name);
      break;
    case TaskId::kCube:
      b.pose_vel("cube_left");
      b.pose_vel("cube_right");
      b.add("target_quat", SegmentKind::kTargetQuat, "cube");
      break;
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard:
      for (const std::string& name : bookshelf_objects(task)) b.pose_vel(name);
      b.add("subtask_index", SegmentKind::kSubtaskIndex);
      break;
    case TaskId::kBasketball:
      b.pos_vel("ball");
      break;
    case TaskId::kWindow:
      b.pose_vel("window_tool");
      b.joint("wipe_joint");
      break;
    case TaskId::kSpoon:
      b.pos_vel("spoon");
      b.add("spoon_target", SegmentKind::kSpoonTarget);
      break;
    case TaskId::kKitchen:
      for (const char* j : {"microwave_door", "burner_knob", "light_switch"}) b.joint(j);
      b.pose_vel("kettle");
      break;
    case TaskId::kPackage:
      b.pos("left_hand");
      b.pos("right_hand");
      b.add("destination_pos", SegmentKind::kTarget, "destination");
      b.pos_vel("package");
      break;
    case TaskId::kPowerlift:
      b.pose_vel("barbell");
      break;
    case TaskId::kRoom:
      for (const std::string& name : room_objects(task)) b.pos_vel(name);
      break;
    case TaskId::kInsertSmall:
    case TaskId::kInsertNormal:
      b.pose_vel("block");
      b.pose_vel("peg_a");
      b.pose_vel("peg_b");
      break;
    default:
      break;
  }
  return b.take();
}

void assemble_observation(const WorldState& s, const TaskSpec& task,
                          const EpisodeState& ep, const ObservationLayout& layout,
                          std::span<double> out) {
  if (static_cast<int>(out.size()) != layout.total_dim) {
    throw Error("observation buffer has wrong size");
  }
  const SceneLayout& scene = *s.layout;
  const RobotModel& robot = scene.robot();
  for (const ObservationSegment& seg : layout.segments) {
    double* o = out.data() + seg.offset;
    auto missing = [&]() {
      return Error("observation segment '" + seg.name + "' has no source " + seg.source);
    };
    auto put3 = [&](const Vec3& v) {
      o[0] = v.x;
      o[1] = v.y;
      o[2] = v.z;
    };
    auto put4 = [&](const Quat& q) {
      o[0] = q.w;
      o[1] = q.x;
      o[2] = q.y;
      o[3] = q.z;
    };
    auto copy = [&](const std::vector<double>& v, int begin) {
      if (static_cast<int>(v.size()) < begin + seg.length) throw missing();
      for (int i = 0; i < seg.length; ++i) o[i] = v[begin + i];
    };
    auto body = [&]() {
      auto id = scene.find_body(seg.ref);
      if (!id) throw missing();
      return *id;
    };
    auto aux = [&]() {
      auto id = scene.find_aux_joint(seg.ref);
      if (!id) throw missing();
      return *id;
    };
    switch (seg.kind) {
      case SegmentKind::kRobotQpos:
        if (static_cast<int>(s.joint_pos.size()) != seg.length + 2) throw missing();
        copy(s.joint_pos, 2);
        break;
      case SegmentKind::kRobotQvel:
        if (static_cast<int>(s.joint_vel.size()) != seg.length) throw missing();
        copy(s.joint_vel, 0);
        break;
      case SegmentKind::kRobotBodyQpos:
        if (seg.length != robot.body_nq - 2) throw missing();
        copy(s.joint_pos, 2);
        break;
      case SegmentKind::kRobotBodyQvel:
        if (seg.length != robot.body_nv) throw missing();
        copy(s.joint_vel, 0);
        break;
      case SegmentKind::kPointPos:
        if (auto site = scene.find_site(seg.ref)) {
          put3(s.site_pos[*site]);
        } else {
          put3(s.body_pos[body()]);
        }
        break;
      case SegmentKind::kBodyQuat:
        put4(s.body_quat[body()]);
        break;
      case SegmentKind::kBodyVel:
        put3(s.body_linvel[body()]);
        break;
      case SegmentKind::kAuxPos:
        o[0] = s.aux_pos[aux()];
        break;
      case SegmentKind::kAuxVel:
        o[0] = s.aux_vel[aux()];
        break;
      case SegmentKind::kTarget: {
        auto it = ep.target_points.find(seg.ref);
        if (it == ep.target_points.end()) throw missing();
        put3(it->second);
        break;
      }
      case SegmentKind::kTargetQuat:
        put4(ep.target_quat);
        break;
      case SegmentKind::kSpoonTarget: {
        auto id = scene.find_body("pot");
        if (!id) throw missing();
        const Vec3 pot = s.body_pos[*id];
        const double phase = static_cast<double>(ep.step_index) * std::numbers::pi /
                             task.param("circle.steps_per_half_turn");
        const double r = task.param("circle.radius");
        put3({pot.x + r * std::cos(phase), pot.y + r * std::sin(phase), pot.z});
        break;
      }
      case SegmentKind::kSubtaskIndex:
        o[0] = static_cast<double>(ep.stage);
        break;
    }
  }
}

std::vector<double> assemble_observation(const WorldState& state, const TaskSpec& task,
                                         const EpisodeState& episode,
                                         const ObservationLayout& layout) {
  std::vector<double> out(layout.total_dim);
  assemble_observation(state, task, episode, layout, out);
  return out;
}

std::string layout_manifest_json(const TaskSpec& task, RobotVariant variant,
                                 const ObservationLayout& layout,
                                 const ActionMap& actions) {
  nlohmann::ordered_json j;
  j["task"] = task.name;
  j["robot"] = std::string(to_string(variant));
  j["frame"] = "world";
  j["obs_dim"] = layout.total_dim;
  nlohmann::ordered_json segs = nlohmann::ordered_json::array();
  for (const ObservationSegment& s : layout.segments) {
    segs.push_back({{"name", s.name},
                    {"source", s.source},
                    {"offset", s.offset},
                    {"length", s.length}});
  }
  j["segments"] = segs;
  const RobotModel robot = robot_model(variant);
  nlohmann::ordered_json acts = nlohmann::ordered_json::array();
  for (int i = 0; i < actions.dim; ++i) {
    acts.push_back({{"name", robot.actuators[i].name},
                    {"lower", actions.lower[i]},
                    {"upper", actions.upper[i]}});
  }
  j["action"] = {{"dim", actions.dim},
                 {"mode", std::string(to_string(actions.mode))},
                 {"blocked_hands", actions.blocked_hands},
                 {"actuators", acts}};
  j["episode_cap"] = task.episode_cap;
  j["success_target"] = task.success_target;
  return j.dump();
}

}  // namespace hbench
