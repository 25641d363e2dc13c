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

#include "hbench/episode.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hbench/error.h"

namespace hbench {

namespace {

constexpr double kGravity = 9.81;

Vec3 vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

Vec3 uniform_in_box(Rng& rng, const std::vector<double>& lo,
                    const std::vector<double>& hi) {
  return {rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]),
          rng.uniform(lo[2], hi[2])};
}

// Uniformly distributed unit quaternion (Shoemake).
Quat random_quat(Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = 2.0 * std::numbers::pi * rng.uniform();
  const double u3 = 2.0 * std::numbers::pi * rng.uniform();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return normalized(
      Quat{a * std::sin(u2), a * std::cos(u2), b * std::sin(u3), b * std::cos(u3)});
}

void shuffle(std::vector<int>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(v[i - 1], v[j]);
  }
}

bool in_box(const Vec3& p, const std::vector<double>& lo,
            const std::vector<double>& hi) {
  return p.x >= lo[0] && p.x <= hi[0] && p.y >= lo[1] && p.y <= hi[1] &&
         p.z >= lo[2] && p.z <= hi[2];
}

PackageCategory categorize(const TaskSpec& task, const Vec3& p) {
  const ParamTable& params = task.params;
  if (in_box(p, params.vec("truck.region_low"), params.vec("truck.region_high"))) {
    return PackageCategory::kTruck;
  }
  if (in_box(p, params.vec("table.region_low"), params.vec("table.region_high"))) {
    return PackageCategory::kTable;
  }
  return PackageCategory::kPicked;
}

std::vector<PackageCategory> categorize_all(const TaskSpec& task,
                                            const WorldState& s) {
  std::vector<PackageCategory> out;
  for (const std::string& name : truck_packages(task)) {
    out.push_back(categorize(task, s.body_position(name)));
  }
  return out;
}

bool all_on_table(const std::vector<PackageCategory>& packages) {
  return !packages.empty() &&
         std::all_of(packages.begin(), packages.end(),
                     [](PackageCategory c) { return c == PackageCategory::kTable; });
}

bool has_geom_group(const SceneLayout& layout, std::string_view group) {
  for (const GeomInfo& g : layout.geoms()) {
    if (g.group == group) return true;
  }
  return false;
}

void set_body(WorldState& s, std::string_view name, const Vec3& pos) {
  s.body_pos[s.layout->body(name)] = pos;
}

// True once the robot touches the ball.
bool ball_touched(const WorldState& s) { return s.in_contact("robot", "ball"); }

double kitchen_distance(const TaskSpec& task, const WorldState& s, int subtask) {
  switch (subtask) {
    case 0:
      return std::abs(s.aux_position("microwave_door") - task.param("goal.microwave"));
    case 1:
      return distance(s.body_position("kettle"), vec3(task.params.vec("goal.kettle")));
    case 2:
      return std::abs(s.aux_position("burner_knob") - task.param("goal.burner"));
    default:
      return std::abs(s.aux_position("light_switch") - task.param("goal.light"));
  }
}

bool cabinet_subtask_done(const TaskSpec& task, const WorldState& s, int stage) {
  const ParamTable& p = task.params;
  const double fraction = p("completion.fraction");
  switch (stage) {
    case 0:
      return std::abs(s.aux_position("cabinet_slide")) >= fraction * p("slide.range");
    case 1:
      return std::abs(s.aux_position("drawer")) >= fraction * p("drawer.range");
    default: {
      // The cube sits inside the destination box on every axis.
      const Vec3 c = s.body_position("cube");
      const double z_center = stage == 2 ? p("destination.z_center_hinge")
                                         : p("destination.z_center_pull");
      auto inside = [&](double x, std::string_view prefix) {
        const Bounds b = p.bounds(prefix);
        return x >= b.lower && x <= b.upper;
      };
      return inside(c.x - p("destination.x_center"), "destination_x") &&
             inside(c.y, "destination_y") && inside(c.z - z_center, "destination_z");
    }
  }
}

}  // namespace

std::string_view to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kNone:
      return "none";
    case TerminationReason::kTimeout:
      return "timeout";
    case TerminationReason::kFailureHeight:
      return "failure_height";
    case TerminationReason::kFailureCollision:
      return "failure_collision";
    case TerminationReason::kSuccess:
      return "success";
    case TerminationReason::kObjectDropped:
      return "object_dropped";
  }
  return "none";
}

const Vec3& EpisodeState::target(std::string_view name) const {
  auto it = target_points.find(name);
  if (it == target_points.end()) throw Error("missing target: " + std::string(name));
  return it->second;
}

std::vector<std::string> missing_scene_content(const TaskSpec& task,
                                               const SceneLayout& layout) {
  const SceneRequirements req = scene_requirements(task);
  std::vector<std::string> missing;
  for (const std::string& b : req.bodies) {
    if (!layout.find_body(b)) missing.push_back("body " + b);
  }
  for (const std::string& s : req.sites) {
    if (!layout.find_site(s)) missing.push_back("site " + s);
  }
  for (const std::string& j : req.aux_joints) {
    if (!layout.find_aux_joint(j)) missing.push_back("joint " + j);
  }
  for (const std::string& g : req.geom_groups) {
    if (!has_geom_group(layout, g)) missing.push_back("geom group " + g);
  }
  return missing;
}

EpisodeState reset(const TaskSpec& task, std::uint64_t seed,
                   PhysicsBackend& backend) {
  const std::vector<std::string> missing =
      missing_scene_content(task, *backend.layout());
  if (!missing.empty()) {
    std::string msg = "scene for task " + task.name + " is missing:";
    for (const std::string& m : missing) msg += " " + m + ";";
    msg.pop_back();
    throw Error(msg);
  }

  EpisodeState ep;
  ep.seed = seed;
  ep.rng = Rng(seed);
  const ParamTable& p = task.params;

  backend.reset_scene();
  WorldState s = backend.snapshot();
  s.step_index = 0;
  s.time = 0.0;

  // Joint noise on every coordinate but the floating base.
  const double noise = p("init.joint_noise");
  for (std::size_t i = 7; i < s.joint_pos.size(); ++i) {
    s.joint_pos[i] += ep.rng.uniform(-noise, noise);
  }

  if (is_staged(task.id)) ep.stage = 0;

  switch (task.id) {
    case TaskId::kSitSimple:
    case TaskId::kSitHard: {
      std::vector<double> xy = p.vec("init.robot_xy");
      Quat q = Quat{};
      if (task.id == TaskId::kSitHard) {
        const std::vector<double>& yaw = p.vec("init.yaw_range");
        const std::vector<double>& xr = p.vec("init.x_range");
        const std::vector<double>& yr = p.vec("init.y_range");
        q = yaw_quat(ep.rng.uniform(yaw[0], yaw[1]));
        xy = {ep.rng.uniform(xr[0], xr[1]), ep.rng.uniform(yr[0], yr[1])};
      }
      s.joint_pos[0] = xy[0];
      s.joint_pos[1] = xy[1];
      s.joint_pos[3] = q.w;
      s.joint_pos[4] = q.x;
      s.joint_pos[5] = q.y;
      s.joint_pos[6] = q.z;
      break;
    }
    case TaskId::kReach:
      ep.target_points["reach"] =
          uniform_in_box(ep.rng, p.vec("init.target_low"), p.vec("init.target_high"));
      break;
    case TaskId::kPush:
      set_body(s, "box", uniform_in_box(ep.rng, p.vec("init.box_low"), p.vec("init.box_high")));
      ep.target_points["destination"] = uniform_in_box(
          ep.rng, p.vec("init.destination_low"), p.vec("init.destination_high"));
      break;
    case TaskId::kPackage:
      set_body(s, "package",
               uniform_in_box(ep.rng, p.vec("init.package_low"), p.vec("init.package_high")));
      ep.target_points["destination"] = uniform_in_box(
          ep.rng, p.vec("init.destination_low"), p.vec("init.destination_high"));
      break;
    case TaskId::kCube:
      ep.target_quat = random_quat(ep.rng);
      s.body_quat[s.layout->body("cube_left")] = random_quat(ep.rng);
      s.body_quat[s.layout->body("cube_right")] = random_quat(ep.rng);
      break;
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard: {
      const int n_obj = static_cast<int>(p("num_objects"));
      const int n_sub = static_cast<int>(p("num_subtasks"));
      std::vector<int> objects(n_obj);
      std::iota(objects.begin(), objects.end(), 0);
      std::vector<int> dests(n_sub);
      std::iota(dests.begin(), dests.end(), 0);
      if (p("init.shuffle") != 0.0) {
        shuffle(objects, ep.rng);
        shuffle(dests, ep.rng);
      }
      objects.resize(n_sub);
      ep.subtask_objects = objects;
      ep.subtask_destinations = dests;
      break;
    }
    case TaskId::kBasketball: {
      const Vec3 pelvis{s.joint_pos[0], s.joint_pos[1], s.joint_pos[2]};
      const std::vector<double>& ang = p.vec("init.angle_range");
      const double omega = ep.rng.uniform(ang[0], ang[1]);
      const double radius = p("init.spawn_radius");
      const double t = p("init.arrival_time");
      const Vec3 arrive = pelvis + vec3(p.vec("init.arrival_offset"));
      const Vec3 spawn{pelvis.x + radius * std::cos(omega),
                       pelvis.y + radius * std::sin(omega), arrive.z};
      const int ball = s.layout->body("ball");
      s.body_pos[ball] = spawn;
      // Ballistic flight reaching `arrive` after t seconds.
      s.body_linvel[ball] = {(arrive.x - spawn.x) / t, (arrive.y - spawn.y) / t,
                             (arrive.z - spawn.z) / t + 0.5 * kGravity * t};
      ep.target_points["ball_arrival"] = arrive;
      break;
    }
    case TaskId::kRoom:
      for (const std::string& name : room_objects(task)) {
        set_body(s, name,
                 uniform_in_box(ep.rng, p.vec("init.region_low"), p.vec("init.region_high")));
      }
      break;
    default:
      break;
  }

  backend.set_state(s);
  backend.forward();
  if (task.id == TaskId::kTruck) {
    ep.packages = categorize_all(task, backend.snapshot());
  }
  return ep;
}

TerminationStatus check_termination(const TaskSpec& task, const WorldState& s,
                                    const EpisodeState& ep) {
  const ParamTable& p = task.params;
  bool success = false;
  bool fell = false;
  bool collided = false;
  bool dropped = false;
  auto below = [&](std::string_view body, std::string_view param) {
    return s.body_position(body).z < p(param);
  };

  switch (task.id) {
    case TaskId::kPush:
      success = distance(s.body_position("box"), ep.target("destination")) <
                p("success.distance");
      break;
    case TaskId::kPackage:
      success = distance(s.body_position("package"), ep.target("destination")) <
                p("success.distance");
      break;
    case TaskId::kCabinet:
      success = ep.completed_subtasks.size() == 4;
      break;
    case TaskId::kTruck:
      success = all_on_table(ep.packages);
      break;
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard: {
      success = static_cast<int>(ep.completed_subtasks.size()) ==
                static_cast<int>(p("num_subtasks"));
      fell = below("pelvis", "term.pelvis_height");
      for (const std::string& name : bookshelf_objects(task)) {
        if (below(name, "term.object_height")) dropped = true;
      }
      break;
    }
    case TaskId::kBasketball:
      success = distance(s.body_position("ball"), s.point("basket")) <=
                p("success.distance");
      fell = below("pelvis", "term.pelvis_height");
      dropped = below("ball", "term.ball_height");
      break;
    case TaskId::kBalanceSimple:
    case TaskId::kBalanceHard: {
      fell = below("pelvis", "term.pelvis_height");
      const auto& geoms = s.layout->geoms();
      for (const Contact& c : s.contacts) {
        const std::string& a = geoms[c.geom_a].group;
        const std::string& b = geoms[c.geom_b].group;
        auto pivot_fault = [](const std::string& x, const std::string& y) {
          return x == "pivot" && y != "floor" && y != "board";
        };
        if (pivot_fault(a, b) || pivot_fault(b, a)) collided = true;
        if ((a == "board" && b == "floor") || (a == "floor" && b == "board")) {
          collided = true;
        }
      }
      break;
    }
    case TaskId::kStair:
    case TaskId::kSlide:
      fell = s.z_proj < p("term.z_proj");
      break;
    case TaskId::kHighbar:
      fell = s.point("head").z < p("term.head_height");
      break;
    case TaskId::kCube:
      fell = below("pelvis", "term.pelvis_height");
      dropped = below("cube_left", "term.cube_height") ||
                below("cube_right", "term.cube_height");
      break;
    case TaskId::kWindow:
      fell = below("pelvis", "term.pelvis_height");
      dropped = below("window_tool", "term.tool_height");
      break;
    case TaskId::kInsertSmall:
    case TaskId::kInsertNormal:
      dropped = below("block", "term.object_height") ||
                below("peg_a", "term.object_height") ||
                below("peg_b", "term.object_height");
      break;
    default:
      if (p.contains("term.pelvis_height")) {
        fell = below("pelvis", "term.pelvis_height");
      }
      break;
  }

  if (success) return {true, TerminationReason::kSuccess};
  if (fell) return {true, TerminationReason::kFailureHeight};
  if (collided) return {true, TerminationReason::kFailureCollision};
  if (dropped) return {true, TerminationReason::kObjectDropped};
  if (ep.step_index >= task.episode_cap) return {true, TerminationReason::kTimeout};
  return {};
}

StageUpdate advance_task_stage(const TaskSpec& task, const WorldState& s,
                               const EpisodeState& episode) {
  StageUpdate out{episode, 0.0};
  EpisodeState& ep = out.episode;
  const ParamTable& p = task.params;
  double bonus = 0.0;

  switch (task.id) {
    case TaskId::kCabinet:
      while (ep.stage >= 0 && ep.stage < 4 && cabinet_subtask_done(task, s, ep.stage)) {
        const int i = ep.stage + 1;
        ep.completed_subtasks.push_back(i);
        bonus += p("bonus.scale") * i;
        ep.stage = i;
        if (i == 4) {
          bonus += p("bonus.all");
          ep.success = true;
        }
      }
      break;

    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard: {
      const int n = static_cast<int>(ep.subtask_objects.size());
      const std::vector<std::string> objects = bookshelf_objects(task);
      const std::vector<std::string> dests = bookshelf_destinations(task);
      while (ep.stage >= 0 && ep.stage < n) {
        const Vec3 obj = s.body_position(objects[ep.subtask_objects[ep.stage]]);
        const Vec3 dst = s.point(dests[ep.subtask_destinations[ep.stage]]);
        if (!(distance(obj, dst) < p("completion.distance"))) break;
        const int i = ep.stage + 1;
        ep.completed_subtasks.push_back(i);
        bonus += p("bonus.scale") * i;
        ep.stage = i;
      }
      if (n > 0 && ep.stage == n) ep.success = true;
      break;
    }

    case TaskId::kMaze: {
      const std::vector<double>& cps = p.vec("checkpoints");
      const int n = static_cast<int>(cps.size() / 3);
      const Vec3 pelvis = s.body_position("pelvis");
      while (ep.checkpoint_index < n) {
        const int k = ep.checkpoint_index;
        const Vec3 cp{cps[3 * k], cps[3 * k + 1], cps[3 * k + 2]};
        if (!(distance(cp, pelvis) < p("checkpoint.radius"))) break;
        const int i = k + 1;
        ep.completed_subtasks.push_back(i);
        bonus += p("bonus.scale") * i;
        ep.checkpoint_index = i;
      }
      ep.stage = ep.checkpoint_index;
      break;
    }

    case TaskId::kBasketball:
      if (ep.stage == kStageCatch && ball_touched(s)) ep.stage = kStageThrow;
      if (!ep.success &&
          distance(s.body_position("ball"), s.point("basket")) <= p("success.distance")) {
        ep.success = true;
        bonus += p("bonus.success");
      }
      break;

    case TaskId::kTruck:
      ep.packages = categorize_all(task, s);
      if (!ep.success && all_on_table(ep.packages)) {
        ep.success = true;
        bonus += p("bonus.all");
      }
      break;

    case TaskId::kKitchen: {
      const double threshold = p("completion.threshold");
      for (int j = 0; j < 4; ++j) {
        if (std::find(ep.completed_subtasks.begin(), ep.completed_subtasks.end(), j) !=
            ep.completed_subtasks.end()) {
          continue;
        }
        if (kitchen_distance(task, s, j) < threshold) {
          ep.completed_subtasks.push_back(j);
          bonus += 1.0;
        }
      }
      break;
    }

    default:
      break;
  }

  ep.step_bonus = bonus;
  ep.sparse_accumulated += bonus;
  out.bonus = bonus;
  return out;
}

bool respawn_reach_target(const TaskSpec& task, const WorldState& s,
                          EpisodeState& ep, PhysicsBackend* backend) {
  if (task.id != TaskId::kReach || task.param("respawn.enabled") == 0.0) return false;
  const ParamTable& p = task.params;
  const double force = p("respawn.force");
  if (force > 0.0 && backend != nullptr) {
    for (const char* body : {"pelvis", "torso"}) {
      const double theta = 2.0 * std::numbers::pi * ep.rng.uniform();
      backend->apply_perturbation(
          body, {force * std::cos(theta), force * std::sin(theta), 0.0});
    }
  }
  if (distance(s.point("left_hand"), ep.target("reach")) >= p("respawn.distance")) {
    return false;
  }
  ep.target_points["reach"] =
      uniform_in_box(ep.rng, p.vec("init.target_low"), p.vec("init.target_high"));
  ++ep.targets_reached;
  return true;
}

}  // namespace hbench
