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

#include "hbench/task.h"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "hbench/error.h"
#include "json.hpp"

namespace hbench {

void ParamTable::set(std::string name, std::vector<double> value) {
  if (value.empty()) throw Error("empty parameter: " + name);
  values_.insert_or_assign(std::move(name), std::move(value));
}

bool ParamTable::contains(std::string_view name) const {
  return values_.find(name) != values_.end();
}

const std::vector<double>& ParamTable::vec(std::string_view name) const {
  auto it = values_.find(name);
  if (it == values_.end()) {
    throw Error("unknown parameter: " + std::string(name));
  }
  return it->second;
}

double ParamTable::operator()(std::string_view name) const {
  const std::vector<double>& v = vec(name);
  if (v.size() != 1) throw Error("parameter is not a scalar: " + std::string(name));
  return v[0];
}

Bounds ParamTable::bounds(std::string_view prefix) const {
  const std::string p(prefix);
  return {(*this)(p + ".lower"), (*this)(p + ".upper")};
}

ToleranceShape TaskSpec::shape(std::string_view term) const {
  auto it = shape_overrides.find(term);
  return it == shape_overrides.end() ? default_shape : it->second;
}

namespace {

// Writes <prefix>.lower/.upper/.margin.
void tol(ParamTable& p, const std::string& prefix, double lower, double upper,
         double margin) {
  p.set(prefix + ".lower", lower);
  p.set(prefix + ".upper", upper);
  p.set(prefix + ".margin", margin);
}

TaskSpec base(TaskId id, const char* name, double target, int cap = 1000,
              bool manipulation = false) {
  TaskSpec t;
  t.id = id;
  t.name = name;
  t.success_target = target;
  t.episode_cap = cap;
  t.manipulation = manipulation;
  ParamTable& p = t.params;
  tol(p, "height", 1.65, kInf, 0.4125);
  tol(p, "upright", 0.9, kInf, 1.9);
  p.set("effort.margin", 10.0);
  p.set("still.margin", 2.0);
  p.set("init.joint_noise", 0.01);
  return t;
}

void locomotion_speed(ParamTable& p, double speed) { tol(p, "speed", speed, kInf, speed); }

std::vector<TaskSpec> build_tasks() {
  std::vector<TaskSpec> tasks;

  {
    TaskSpec t = base(TaskId::kWalk, "walk", 700.0);
    locomotion_speed(t.params, 1.0);
    t.params.set("term.pelvis_height", 0.2);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kStand, "stand", 800.0);
    t.params.set("term.pelvis_height", 0.2);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kRun, "run", 700.0);
    locomotion_speed(t.params, 5.0);
    t.params.set("term.pelvis_height", 0.2);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kReach, "reach", 12000.0);
    ParamTable& p = t.params;
    p.set("motion_penalty", 1e-4);
    p.set("health.scale", 5.0);
    p.set("close.reward", 5.0);
    p.set("close.distance", 1.0);
    p.set("success.reward", 10.0);
    p.set("success.distance", 0.05);
    p.set("init.target_low", {0.0, 0.0, 0.6});
    p.set("init.target_high", {0.6, 0.6, 1.6});
    p.set("respawn.enabled", 0.0);
    p.set("respawn.distance", 0.05);
    p.set("respawn.force", 0.0);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kHurdle, "hurdle", 700.0);
    locomotion_speed(t.params, 5.0);
    t.params.set("collision.gamma", 0.1);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kCrawl, "crawl", 700.0);
    ParamTable& p = t.params;
    tol(p, "height_crawl", 0.6, 1.0, 1.0);
    tol(p, "height_imu", 0.6, 1.0, 1.0);
    p.set("quat_crawl", {0.75, 0.0, 0.65, 0.0});
    p.set("orientation.margin", 1.0);
    tol(p, "tunnel", -1.0, 1.0, 0.0);
    locomotion_speed(p, 1.0);
    p.set("w.effort", 0.1);
    p.set("w.height", 0.25);
    p.set("w.orientation", 0.25);
    p.set("w.speed", 0.4);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kMaze, "maze", 1200.0);
    ParamTable& p = t.params;
    p.set("w.stable", 0.2);
    p.set("w.move", 0.4);
    p.set("w.proximity", 0.4);
    p.set("proximity.margin", 1.0);
    p.set("collision.gamma", 0.1);
    // Placeholder course: three legs at 1 m/s.
    p.set("checkpoints", {3.0, 0.0, 1.0, 3.0, 6.0, 1.0, 6.0, 6.0, 1.0});
    p.set("leg_velocity", {1.0, 0.0, 0.0, 1.0, 1.0, 0.0});
    p.set("checkpoint.radius", 0.5);
    p.set("bonus.scale", 100.0);
    p.set("term.pelvis_height", 0.2);
    tasks.push_back(t);
  }
  for (bool hard : {false, true}) {
    TaskSpec t = base(hard ? TaskId::kSitHard : TaskId::kSitSimple,
                      hard ? "sit_hard" : "sit_simple", 750.0);
    ParamTable& p = t.params;
    tol(p, "sitting_x", -0.19, 0.19, 0.2);
    tol(p, "sitting_y", 0.0, 0.0, 0.1);
    tol(p, "sitting_z", 0.68, 0.72, 0.2);
    tol(p, "posture", 0.35, 0.45, 0.3);
    p.set("term.pelvis_height", 0.5);
    p.set("init.robot_xy", {0.3, 0.0});
    if (hard) {
      p.set("init.yaw_range", {-1.8, 1.8});
      p.set("init.x_range", {0.2, 0.4});
      p.set("init.y_range", {-0.15, 0.15});
    }
    tasks.push_back(t);
  }
  for (bool hard : {false, true}) {
    TaskSpec t = base(hard ? TaskId::kBalanceHard : TaskId::kBalanceSimple,
                      hard ? "balance_hard" : "balance_simple", 800.0);
    tol(t.params, "height_robot", 2.15, kInf, 0.4125);
    t.params.set("term.pelvis_height", 0.8);
    tasks.push_back(t);
  }
  for (bool slide : {false, true}) {
    TaskSpec t = base(slide ? TaskId::kSlide : TaskId::kStair,
                      slide ? "slide" : "stair", 700.0);
    ParamTable& p = t.params;
    tol(p, "vertical_foot", 1.2, kInf, 0.45);
    locomotion_speed(p, 1.0);
    tol(p, "upright_task", 0.5, 1.0, 1.9);
    p.set("term.z_proj", slide ? 0.6 : 0.1);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kPole, "pole", 700.0);
    ParamTable& p = t.params;
    p.set("collision.gamma", 0.1);
    locomotion_speed(p, 1.0);
    p.set("w.stable", 0.5);
    p.set("w.speed", 0.5);
    p.set("term.pelvis_height", 0.6);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kPush, "push", 700.0, 500, true);
    ParamTable& p = t.params;
    p.set("alpha_s", 1000.0);
    p.set("alpha_t", 1.0);
    p.set("alpha_h", 0.1);
    p.set("success.distance", 0.05);
    p.set("init.box_low", {0.65, -0.25, 0.98});
    p.set("init.box_high", {0.85, 0.25, 0.98});
    p.set("init.destination_low", {0.65, -0.25, 0.98});
    p.set("init.destination_high", {0.85, 0.25, 0.98});
    p.set("hierarchy.clip_low", {0.2, -0.5, 0.8});
    p.set("hierarchy.clip_high", {1.0, 0.5, 1.4});
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kCabinet, "cabinet", 2500.0, 1000, true);
    ParamTable& p = t.params;
    p.set("w.stable", 0.2);
    p.set("w.task", 0.8);
    p.set("slide.range", 0.4);
    p.set("drawer.range", 0.45);
    p.set("w.open", 0.5);
    p.set("w.destination", 0.5);
    p.set("w.destination_xy", 0.3);
    p.set("w.destination_z", 0.7);
    p.set("destination.x_center", 0.9);
    p.set("destination.z_center_hinge", 0.94);
    p.set("destination.z_center_pull", 1.54);
    tol(p, "destination_x", -0.3, 0.3, 0.3);
    tol(p, "destination_y", -0.6, 0.6, 0.3);
    tol(p, "destination_z", -0.15, 0.15, 0.3);
    p.set("completion.fraction", 0.95);
    p.set("bonus.scale", 100.0);
    p.set("bonus.all", 1000.0);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kHighbar, "highbar", 750.0, 1000, true);
    ParamTable& p = t.params;
    tol(p, "upright_highbar", -kInf, -0.9, 1.9);
    tol(p, "feet", 4.8, kInf, 2.0);
    p.set("term.head_height", 2.0);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kDoor, "door", 600.0, 1000, true);
    ParamTable& p = t.params;
    p.set("w.stable", 0.1);
    p.set("w.open_door", 0.45);
    p.set("w.open_hatch", 0.05);
    p.set("w.proximity", 0.05);
    p.set("w.passage", 0.35);
    tol(p, "hatch", 0.75, 2.0, 0.75);
    tol(p, "proximity", 0.0, 0.25, 1.0);
    tol(p, "passage", 1.2, kInf, 1.0);
    p.set("term.pelvis_height", 0.58);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kTruck, "truck", 3000.0, 1000, true);
    ParamTable& p = t.params;
    tol(p, "package", 0.0, 0.2, 4.0);
    p.set("location.scale", 100.0);
    p.set("bonus.all", 1000.0);
    p.set("num_packages", 4.0);
    p.set("truck.region_low", {1.5, -1.0, 0.9});
    p.set("truck.region_high", {3.5, 1.0, 2.5});
    p.set("table.region_low", {-0.5, 1.0, 0.6});
    p.set("table.region_high", {0.5, 2.0, 1.5});
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kCube, "cube", 370.0, 500, true);
    ParamTable& p = t.params;
    p.set("w.stable_still", 0.2);
    p.set("w.orientation", 0.5);
    p.set("w.proximity", 0.3);
    p.set("proximity.margin", 0.5);
    p.set("orientation_as_tolerance", 0.0);
    p.set("orientation.margin", 1.0);
    p.set("term.pelvis_height", 0.5);
    p.set("term.cube_height", 0.5);
    tasks.push_back(t);
  }
  for (bool hard : {false, true}) {
    TaskSpec t = base(hard ? TaskId::kBookshelfHard : TaskId::kBookshelfSimple,
                      hard ? "bookshelf_hard" : "bookshelf_simple", 2000.0,
                      1000, true);
    ParamTable& p = t.params;
    p.set("w.hand", 0.4);
    p.set("w.stable", 0.2);
    p.set("w.destination", 0.4);
    tol(p, "destination", 0.0, 0.15, 1.0);
    p.set("completion.distance", 0.15);
    p.set("bonus.scale", 100.0);
    p.set("num_objects", 7.0);
    p.set("num_subtasks", 5.0);
    p.set("init.shuffle", hard ? 1.0 : 0.0);
    p.set("term.pelvis_height", 0.58);
    p.set("term.object_height", 0.5);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kBasketball, "basketball", 1200.0, 500, true);
    ParamTable& p = t.params;
    p.set("w.catch_proximity", 0.5);
    p.set("w.catch_stable", 0.5);
    p.set("w.throw_proximity", 0.05);
    p.set("w.throw_stable", 0.15);
    p.set("w.throw_aim", 0.8);
    tol(p, "proximity", 0.0, 0.2, 1.0);
    tol(p, "aim", 0.0, 0.0, 7.0);
    p.set("success.distance", 0.05);
    p.set("bonus.success", 1000.0);
    p.set("init.spawn_radius", 1.5);
    p.set("init.angle_range", {-1.45, 1.45});
    p.set("init.arrival_time", 0.2);
    p.set("init.arrival_offset", {0.35, 0.0, 0.35});
    p.set("term.pelvis_height", 0.5);
    p.set("term.ball_height", 0.5);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kWindow, "window", 650.0, 1000, true);
    ParamTable& p = t.params;
    p.set("w.move", 0.4);
    p.set("w.proximity", 0.4);
    p.set("w.stable_window", 0.2);
    p.set("w.manipulation", 0.5);
    p.set("w.contact", 0.5);
    p.set("proximity.margin", 0.5);
    tol(p, "window_distance", 0.4, 0.4, 0.1);
    tol(p, "wipe_speed", 0.5, 0.5, 0.5);
    tol(p, "contact_x", 0.92, 0.92, 0.4);
    p.set("term.pelvis_height", 0.58);
    p.set("term.tool_height", 0.58);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kSpoon, "spoon", 650.0, 1000, true);
    ParamTable& p = t.params;
    p.set("w.stable", 0.15);
    p.set("w.proximity", 0.25);
    p.set("w.destination", 0.25);
    p.set("w.trajectory", 0.35);
    p.set("proximity.margin", 0.5);
    p.set("circle.radius", 0.06);
    p.set("circle.steps_per_half_turn", 20.0);
    p.set("trajectory.margin", 0.15);
    p.set("pot.half_extent", {0.1, 0.1, 0.1});
    p.set("term.pelvis_height", 0.58);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kKitchen, "kitchen", 4.0, 500, true);
    ParamTable& p = t.params;
    p.set("goal.microwave", -0.75);
    p.set("goal.kettle", {-0.23, 0.75, 1.62});
    p.set("goal.burner", -0.88);
    p.set("goal.light", -0.69);
    p.set("completion.threshold", 0.3);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kPackage, "package", 1500.0, 1000, true);
    ParamTable& p = t.params;
    p.set("w.destination", 3.0);
    p.set("w.hand", 0.1);
    p.set("success.reward", 1000.0);
    p.set("success.distance", 0.1);
    p.set("init.package_low", {0.6, -0.5, 0.35});
    p.set("init.package_high", {1.0, 0.5, 0.35});
    p.set("init.destination_low", {-1.0, -1.0, 0.35});
    p.set("init.destination_high", {1.0, 1.0, 1.0});
    p.set("hierarchy.clip_low", {-0.2, -0.8, 0.3});
    p.set("hierarchy.clip_high", {1.0, 0.8, 1.6});
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kPowerlift, "powerlift", 800.0, 1000, true);
    ParamTable& p = t.params;
    p.set("w.stable", 0.2);
    p.set("w.barbell", 0.8);
    tol(p, "barbell", 1.9, 2.1, 2.0);
    p.set("term.pelvis_height", 0.2);
    tasks.push_back(t);
  }
  {
    TaskSpec t = base(TaskId::kRoom, "room", 400.0, 1000, true);
    ParamTable& p = t.params;
    p.set("w.stable", 0.2);
    p.set("w.cleanness", 0.8);
    p.set("cleanness.margin", 3.0);
    p.set("num_objects", 6.0);
    p.set("init.region_low", {-2.5, -2.5, 0.1});
    p.set("init.region_high", {2.5, 2.5, 0.1});
    p.set("term.pelvis_height", 0.3);
    tasks.push_back(t);
  }
  for (bool normal : {false, true}) {
    TaskSpec t = base(normal ? TaskId::kInsertNormal : TaskId::kInsertSmall,
                      normal ? "insert_normal" : "insert_small", 350.0, 1000,
                      true);
    ParamTable& p = t.params;
    p.set("w.stable", 0.5);
    p.set("w.block", 0.5);
    p.set("w.height", 0.5);
    p.set("w.hands", 0.5);
    p.set("proximity.margin", 0.5);
    p.set("peg_height.target", 1.1);
    p.set("peg_height.margin", 0.15);
    p.set("block.length", normal ? 0.4 : 0.3);
    p.set("term.object_height", 0.5);
    tasks.push_back(t);
  }

  // Keep TaskId order.
  std::vector<TaskSpec> ordered(kNumTasks);
  for (TaskSpec& t : tasks) ordered[static_cast<int>(t.id)] = std::move(t);
  return ordered;
}

const std::vector<TaskSpec>& registry() {
  static const std::vector<TaskSpec> tasks = build_tasks();
  return tasks;
}

std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

nlohmann::ordered_json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const nlohmann::json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw Error("parameter " + key + ": expected a number, \"inf\" or \"-inf\"");
}

}  // namespace

std::span<const TaskSpec> all_tasks() { return registry(); }

const TaskSpec& builtin_task(TaskId id) {
  return registry()[static_cast<int>(id)];
}

const TaskSpec& find_task(std::string_view name) {
  for (const TaskSpec& t : registry()) {
    if (t.name == name) return t;
  }
  std::string valid;
  for (const TaskSpec& t : registry()) {
    if (!valid.empty()) valid += ", ";
    valid += t.name;
  }
  throw Error("unknown task '" + std::string(name) + "'; valid tasks: " + valid);
}

std::vector<std::string> task_names() {
  std::vector<std::string> names;
  for (const TaskSpec& t : registry()) names.push_back(t.name);
  return names;
}

bool is_staged(TaskId id) {
  switch (id) {
    case TaskId::kCabinet:
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard:
    case TaskId::kBasketball:
    case TaskId::kMaze:
      return true;
    default:
      return false;
  }
}

std::vector<std::string> truck_packages(const TaskSpec& task) {
  return numbered("package_", static_cast<int>(task.param("num_packages")));
}
std::vector<std::string> room_objects(const TaskSpec& task) {
  return numbered("room_object_", static_cast<int>(task.param("num_objects")));
}
std::vector<std::string> bookshelf_objects(const TaskSpec& task) {
  return numbered("shelf_object_", static_cast<int>(task.param("num_objects")));
}
std::vector<std::string> bookshelf_destinations(const TaskSpec& task) {
  return numbered("shelf_destination_",
                  static_cast<int>(task.param("num_subtasks")));
}

SceneRequirements scene_requirements(const TaskSpec& task) {
  SceneRequirements r;
  r.bodies = {"pelvis", "torso"};
  r.sites = {"head", "imu", "left_hand", "right_hand", "left_foot",
             "right_foot"};
  r.geom_groups = {"robot", "floor"};
  auto add = [](std::vector<std::string>& to, std::vector<std::string> names) {
    to.insert(to.end(), names.begin(), names.end());
  };
  switch (task.id) {
    case TaskId::kHurdle:
    case TaskId::kMaze:
      r.geom_groups.push_back("wall");
      break;
    case TaskId::kPole:
      r.geom_groups.push_back("pole");
      break;
    case TaskId::kSitSimple:
    case TaskId::kSitHard:
      r.bodies.push_back("chair");
      break;
    case TaskId::kBalanceSimple:
    case TaskId::kBalanceHard:
      add(r.bodies, {"board", "pivot"});
      add(r.geom_groups, {"board", "pivot"});
      break;
    case TaskId::kPush:
      r.bodies.push_back("box");
      break;
    case TaskId::kCabinet:
      r.bodies.push_back("cube");
      r.aux_joints = {"cabinet_slide", "drawer", "hinge_left", "hinge_right",
                      "pullup"};
      break;
    case TaskId::kDoor:
      r.bodies.push_back("door");
      r.aux_joints = {"door_hinge", "door_hatch"};
      break;
    case TaskId::kTruck:
      add(r.bodies, truck_packages(task));
      r.sites.push_back("table");
      break;
    case TaskId::kCube:
      add(r.bodies, {"cube_left", "cube_right"});
      break;
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard:
      add(r.bodies, bookshelf_objects(task));
      add(r.sites, bookshelf_destinations(task));
      break;
    case TaskId::kBasketball:
      r.bodies.push_back("ball");
      r.sites.push_back("basket");
      r.geom_groups.push_back("ball");
      break;
    case TaskId::kWindow:
      add(r.bodies, {"window_tool", "wipe", "window"});
      add(r.sites, numbered("wipe_contact_", 5));
      r.aux_joints = {"wipe_joint"};
      break;
    case TaskId::kSpoon:
      add(r.bodies, {"spoon", "pot"});
      break;
    case TaskId::kKitchen:
      r.bodies.push_back("kettle");
      r.aux_joints = {"microwave_door", "burner_knob", "light_switch"};
      break;
    case TaskId::kPackage:
      r.bodies.push_back("package");
      break;
    case TaskId::kPowerlift:
      r.bodies.push_back("barbell");
      break;
    case TaskId::kRoom:
      add(r.bodies, room_objects(task));
      break;
    case TaskId::kInsertSmall:
    case TaskId::kInsertNormal:
      add(r.bodies, {"block", "peg_a", "peg_b"});
      add(r.sites, {"block_end_a", "block_end_b"});
      break;
    default:
      break;
  }
  return r;
}

std::string task_config_json(const TaskSpec& task) {
  nlohmann::ordered_json j;
  j["task"] = task.name;
  j["episode_cap"] = task.episode_cap;
  j["success_target"] = task.success_target;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [name, value] : task.params.entries()) {
    if (value.size() == 1) {
      params[name] = number_to_json(value[0]);
    } else {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (double v : value) arr.push_back(number_to_json(v));
      params[name] = arr;
    }
  }
  j["params"] = params;
  j["default_shape"] = {{"sigmoid", to_string(task.default_shape.sigmoid)},
                        {"value_at_margin", task.default_shape.value_at_margin}};
  nlohmann::ordered_json shapes = nlohmann::ordered_json::object();
  for (const auto& [term, shape] : task.shape_overrides) {
    shapes[term] = {{"sigmoid", to_string(shape.sigmoid)},
                    {"value_at_margin", shape.value_at_margin}};
  }
  j["shapes"] = shapes;
  return j.dump(2) + "\n";
}

TaskSpec parse_task_config(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("task config: ") + e.what());
  }
  if (!j.contains("task")) throw Error("task config: missing \"task\"");
  TaskSpec task = find_task(j.at("task").get<std::string>());
  if (j.contains("episode_cap")) task.episode_cap = j.at("episode_cap").get<int>();
  if (task.episode_cap < 1) throw Error("task config: episode_cap must be >= 1");
  if (j.contains("success_target")) {
    task.success_target = j.at("success_target").get<double>();
  }
  if (j.contains("params")) {
    for (const auto& [key, value] : j.at("params").items()) {
      if (!task.params.contains(key)) {
        throw Error("task config: unknown parameter '" + key + "' for task " +
                    task.name);
      }
      std::vector<double> v;
      if (value.is_array()) {
        for (const auto& e : value) v.push_back(number_from_json(e, key));
      } else {
        v.push_back(number_from_json(value, key));
      }
      if (v.size() != task.params.vec(key).size()) {
        throw Error("task config: parameter '" + key + "' has wrong length");
      }
      task.params.set(key, std::move(v));
    }
  }
  auto read_shape = [](const nlohmann::json& s) {
    ToleranceShape shape;
    shape.sigmoid = sigmoid_from_string(s.at("sigmoid").get<std::string>());
    shape.value_at_margin = s.at("value_at_margin").get<double>();
    if (!(shape.value_at_margin > 0.0 && shape.value_at_margin < 1.0)) {
      throw Error("task config: value_at_margin must be in (0, 1)");
    }
    return shape;
  };
  if (j.contains("default_shape")) task.default_shape = read_shape(j.at("default_shape"));
  if (j.contains("shapes")) {
    for (const auto& [term, s] : j.at("shapes").items()) {
      task.shape_overrides[term] = read_shape(s);
    }
  }
  return task;
}

TaskSpec load_task_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open task config: " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_task_config(buffer.str());
}

TaskSpec resolve_task(std::string_view name, const std::filesystem::path& config_dir) {
  const TaskSpec& builtin = find_task(name);
  if (!config_dir.empty()) {
    const auto path = config_dir / (std::string(name) + ".json");
    if (std::filesystem::exists(path)) return load_task_config(path);
  }
  return builtin;
}

}  // namespace hbench
