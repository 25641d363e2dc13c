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

#include "hbench/reward.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "hbench/error.h"

namespace hbench {

double effort_term(std::span<const double> u, double margin,
                   const ToleranceShape& shape) {
  if (u.empty()) throw Error("effort term of an empty action");
  double sum = 0.0;
  for (double ui : u) sum += tolerance(ui, {0.0, 0.0}, margin, shape);
  return 0.2 * (4.0 + sum / static_cast<double>(u.size()));
}

double effort_term(const TaskSpec& task, std::span<const double> u) {
  return effort_term(u, task.param("effort.margin"), task.shape("effort"));
}

namespace {

// Tolerance whose bounds and margin are task parameters under `prefix`.
double tol(const TaskSpec& task, double x, std::string_view prefix) {
  const std::string p(prefix);
  return tolerance(x, task.params.bounds(p), task.param(p + ".margin"),
                   task.shape(prefix));
}

double tol(const TaskSpec& task, double x, double lower, double upper,
           double margin, std::string_view term) {
  return tolerance(x, {lower, upper}, margin, task.shape(term));
}

double still_term(const TaskSpec& task, const WorldState& s) {
  const double m = task.param("still.margin");
  const double sx = tol(task, s.pelvis_frame_vel.x, 0.0, 0.0, m, "still");
  const double sy = tol(task, s.pelvis_frame_vel.y, 0.0, 0.0, m, "still");
  return 0.5 * (sx + sy);
}

double z_of(const WorldState& s, std::string_view name) { return s.point(name).z; }

double quat_distance_sq(const Quat& a, const Quat& b) {
  const double dw = a.w - b.w, dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dw * dw + dx * dx + dy * dy + dz * dz;
}

double population_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return var / static_cast<double>(v.size());
}

void require_stage(const TaskSpec& task, const EpisodeState& episode) {
  if (is_staged(task.id) && episode.stage < 0) {
    throw Error("missing episode stage for task " + task.name);
  }
}

using Terms = std::map<std::string, double>;

double locomotion(const TaskSpec& task, const WorldState& s,
                  const PostureTerms& pt, Terms& terms) {
  const double speed = tol(task, s.pelvis_frame_vel.x, "speed");
  terms["speed"] = speed;
  return pt.stable * speed;
}

double collision_factor(const TaskSpec& task, const WorldState& s,
                        std::string_view obstacle, Terms& terms) {
  const double g = s.in_contact("robot", obstacle) ? task.param("collision.gamma") : 1.0;
  terms["collision"] = g;
  return g;
}

double dense_reward(const TaskSpec& task, const WorldState& s,
                    std::span<const double> /*u*/, const EpisodeState& ep,
                    const PostureTerms& pt, Terms& terms) {
  const ParamTable& p = task.params;
  switch (task.id) {
    case TaskId::kWalk:
    case TaskId::kRun:
      return locomotion(task, s, pt, terms);

    case TaskId::kStand:
      return pt.stable * pt.still;

    case TaskId::kReach: {
      const double d_hand = distance(s.point("left_hand"), ep.target("reach"));
      double penalty = 0.0;
      for (double v : s.joint_vel) penalty += v * v;
      const double health = p("health.scale") * s.z_proj;
      const double close = d_hand < p("close.distance") ? p("close.reward") : 0.0;
      const double success =
          d_hand < p("success.distance") ? p("success.reward") : 0.0;
      terms["d_hand"] = d_hand;
      terms["penalty_motion"] = penalty;
      terms["health"] = health;
      terms["close"] = close;
      terms["success"] = success;
      return -p("motion_penalty") * penalty + health + close + success;
    }

    case TaskId::kHurdle: {
      const double base = locomotion(task, s, pt, terms);
      return base * collision_factor(task, s, "wall", terms);
    }

    case TaskId::kCrawl: {
      const double height_crawl = tol(task, z_of(s, "head"), "height_crawl");
      const double height_imu = tol(task, z_of(s, "imu"), "height_imu");
      const std::vector<double>& qc = p.vec("quat_crawl");
      const Quat q = s.body_orientation("pelvis");
      const double qd = std::sqrt(quat_distance_sq(q, {qc[0], qc[1], qc[2], qc[3]}));
      const double orientation =
          tol(task, qd, 0.0, 0.0, p("orientation.margin"), "orientation");
      const double tunnel = tol(task, s.point("imu").y, "tunnel");
      const double speed = tol(task, s.pelvis_frame_vel.x, "speed");
      terms["height_crawl"] = height_crawl;
      terms["height_imu"] = height_imu;
      terms["orientation"] = orientation;
      terms["tunnel"] = tunnel;
      terms["speed"] = speed;
      return tunnel * (p("w.effort") * pt.effort +
                       p("w.height") * std::min(height_crawl, height_imu) +
                       p("w.orientation") * orientation + p("w.speed") * speed);
    }

    case TaskId::kMaze: {
      const std::vector<double>& cps = p.vec("checkpoints");
      const std::vector<double>& legs = p.vec("leg_velocity");
      const int n = static_cast<int>(cps.size() / 3);
      const int i = std::clamp(ep.checkpoint_index, 0, n - 1);
      const Vec3 checkpoint{cps[3 * i], cps[3 * i + 1], cps[3 * i + 2]};
      double vtx = 0.0, vty = 0.0;
      if (ep.checkpoint_index < n) {
        vtx = legs[2 * ep.checkpoint_index];
        vty = legs[2 * ep.checkpoint_index + 1];
      }
      // Margins are the target components' magnitudes; zero degenerates to
      // an indicator.
      const double move =
          tol(task, s.pelvis_frame_vel.x - vtx, 0.0, 0.0, std::abs(vtx), "move") *
          tol(task, s.pelvis_frame_vel.y - vty, 0.0, 0.0, std::abs(vty), "move");
      const double proximity =
          tol(task, distance(checkpoint, s.body_position("pelvis")), 0.0, 0.0,
              p("proximity.margin"), "proximity");
      terms["move"] = move;
      terms["proximity"] = proximity;
      const double g = collision_factor(task, s, "wall", terms);
      return (p("w.stable") * pt.stable + p("w.move") * move +
              p("w.proximity") * proximity) * g;
    }

    case TaskId::kSitSimple:
    case TaskId::kSitHard: {
      const Vec3 robot = s.body_position("pelvis");
      const Vec3 chair = s.body_position("chair");
      const double sx = tol(task, robot.x - chair.x, "sitting_x");
      const double sy = tol(task, robot.y - chair.y, "sitting_y");
      const double sz = tol(task, robot.z, "sitting_z");
      const double posture = tol(task, z_of(s, "head") - z_of(s, "imu"), "posture");
      terms["sitting_x"] = sx;
      terms["sitting_y"] = sy;
      terms["sitting_z"] = sz;
      terms["posture"] = posture;
      return ((0.5 * sz + 0.5 * sx * sy) * pt.upright * posture) * pt.effort *
             pt.still;
    }

    case TaskId::kBalanceSimple:
    case TaskId::kBalanceHard: {
      const double height_robot = tol(task, z_of(s, "head"), "height_robot");
      terms["height_robot"] = height_robot;
      return (pt.effort * pt.still) * (height_robot * pt.upright);
    }

    case TaskId::kStair:
    case TaskId::kSlide: {
      const double head = z_of(s, "head");
      const double left = tol(task, head - z_of(s, "left_foot"), "vertical_foot");
      const double right = tol(task, head - z_of(s, "right_foot"), "vertical_foot");
      const double speed = tol(task, s.pelvis_frame_vel.x, "speed");
      const double upright = tol(task, s.z_proj, "upright_task");
      terms["vertical_foot_left"] = left;
      terms["vertical_foot_right"] = right;
      terms["speed"] = speed;
      terms["upright_task"] = upright;
      return pt.effort * speed * upright * (left * right);
    }

    case TaskId::kPole: {
      const double speed = tol(task, s.pelvis_frame_vel.x, "speed");
      terms["speed"] = speed;
      const double g = collision_factor(task, s, "pole", terms);
      return g * (p("w.stable") * pt.stable + p("w.speed") * speed);
    }

    case TaskId::kPush: {
      const Vec3 box = s.body_position("box");
      const double d_goal = distance(box, ep.target("destination"));
      const double d_hand = distance(box, s.point("left_hand"));
      const double success = d_goal < p("success.distance") ? 1.0 : 0.0;
      terms["d_goal"] = d_goal;
      terms["d_hand"] = d_hand;
      terms["success"] = success;
      return p("alpha_s") * success - p("alpha_t") * d_goal - p("alpha_h") * d_hand;
    }

    case TaskId::kCabinet: {
      const int stage = std::min(ep.stage, 3);
      double r = 0.0;
      if (stage == 0) {
        r = std::abs(s.aux_position("cabinet_slide") / p("slide.range"));
      } else if (stage == 1) {
        r = std::abs(s.aux_position("drawer") / p("drawer.range"));
      } else {
        const Vec3 cube = s.body_position("cube");
        const double z_center = stage == 2 ? p("destination.z_center_hinge")
                                           : p("destination.z_center_pull");
        const double dx =
            tol(task, cube.x - p("destination.x_center"), "destination_x");
        const double dy = tol(task, cube.y, "destination_y");
        const double dz = tol(task, cube.z - z_center, "destination_z");
        const double r_dest = p("w.destination_xy") * 0.5 * (dx + dy) +
                              p("w.destination_z") * dz;
        double open = 0.0;
        if (stage == 2) {
          open = std::max(std::min(1.0, std::abs(s.aux_position("hinge_left"))),
                          std::min(1.0, std::abs(s.aux_position("hinge_right"))));
        } else {
          open = std::min(1.0, std::abs(s.aux_position("pullup")));
        }
        terms["open"] = open;
        terms["r_destination"] = r_dest;
        r = p("w.open") * open + p("w.destination") * r_dest;
      }
      terms["stage_reward"] = r;
      return p("w.stable") * pt.stable + p("w.task") * r;
    }

    case TaskId::kHighbar: {
      const double upright = tol(task, s.z_proj, "upright_highbar");
      const double feet =
          tol(task, 0.5 * (z_of(s, "left_foot") + z_of(s, "right_foot")), "feet");
      terms["upright_highbar"] = upright;
      terms["feet"] = feet;
      return upright * feet * pt.effort;
    }

    case TaskId::kDoor: {
      const double q_door = s.aux_position("door_hinge");
      const double open_door = std::min(1.0, q_door * q_door);
      const double open_hatch = tol(task, s.aux_position("door_hatch"), "hatch");
      const Vec3 door = s.body_position("door");
      const double d = std::min(distance(s.point("left_hand"), door),
                                distance(s.point("right_hand"), door));
      const double proximity = tol(task, d, "proximity");
      const double passage = tol(task, s.point("imu").x, "passage");
      terms["open_door"] = open_door;
      terms["open_hatch"] = open_hatch;
      terms["proximity"] = proximity;
      terms["passage"] = passage;
      return p("w.stable") * pt.stable + p("w.open_door") * open_door +
             p("w.open_hatch") * open_hatch + p("w.proximity") * proximity +
             p("w.passage") * passage;
    }

    case TaskId::kTruck: {
      const std::vector<std::string> names = truck_packages(task);
      if (ep.packages.size() != names.size()) {
        throw Error("missing package categories for task truck");
      }
      const Vec3 pelvis = s.body_position("pelvis");
      const Vec3 table = s.point("table");
      const double inf = std::numeric_limits<double>::infinity();
      double min_truck = inf, min_picked = inf, min_table = inf;
      int n_truck = 0, n_picked = 0, n_table = 0;
      for (std::size_t k = 0; k < names.size(); ++k) {
        const Vec3 pos = s.body_position(names[k]);
        switch (ep.packages[k]) {
          case PackageCategory::kTruck:
            ++n_truck;
            min_truck = std::min(min_truck, distance(pos, pelvis));
            break;
          case PackageCategory::kPicked:
            ++n_picked;
            min_picked = std::min(min_picked, distance(pos, pelvis));
            break;
          case PackageCategory::kTable:
            ++n_table;
            min_table = std::min(min_table, distance(pos, table));
            break;
        }
      }
      // An empty category contributes nothing.
      auto term = [&](double d) { return d == inf ? 0.0 : tol(task, d, "package"); };
      const double truck = term(min_truck);
      const double picked = term(min_picked);
      const double on_table = term(min_table);
      const double r_location = p("location.scale") * (n_table + n_picked - n_truck);
      terms["truck"] = truck;
      terms["picked"] = picked;
      terms["table"] = on_table;
      terms["r_location"] = r_location;
      return r_location + pt.upright * (1.0 + truck + picked + on_table);
    }

    case TaskId::kCube: {
      const Quat qt = ep.target_quat;
      const double err =
          0.5 * (quat_distance_sq(s.body_orientation("cube_left"), qt) +
                 quat_distance_sq(s.body_orientation("cube_right"), qt));
      const double orientation =
          p("orientation_as_tolerance") != 0.0
              ? tol(task, err, 0.0, 0.0, p("orientation.margin"), "orientation")
              : err;
      const double m = p("proximity.margin");
      const double proximity =
          0.5 * (tol(task, distance(s.body_position("cube_left"), s.point("left_hand")),
                     0.0, 0.0, m, "proximity") +
                 tol(task, distance(s.body_position("cube_right"), s.point("right_hand")),
                     0.0, 0.0, m, "proximity"));
      terms["orientation"] = orientation;
      terms["proximity"] = proximity;
      return p("w.stable_still") * (pt.stable * pt.still) +
             p("w.orientation") * orientation + p("w.proximity") * proximity;
    }

    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard: {
      const int n = static_cast<int>(ep.subtask_objects.size());
      if (n == 0 || static_cast<int>(ep.subtask_destinations.size()) != n) {
        throw Error("missing subtask order for task " + task.name);
      }
      const int k = std::min(ep.stage, n - 1);
      const Vec3 object =
          s.body_position(bookshelf_objects(task)[ep.subtask_objects[k]]);
      const Vec3 dest =
          s.point(bookshelf_destinations(task)[ep.subtask_destinations[k]]);
      const double prox_dest = tol(task, distance(object, dest), "destination");
      const double d_hand = std::min(distance(object, s.point("left_hand")),
                                     distance(object, s.point("right_hand")));
      const double prox_hand = std::exp(-d_hand);
      terms["proximity_destination"] = prox_dest;
      terms["proximity_hand"] = prox_hand;
      return p("w.hand") * prox_hand + p("w.stable") * pt.stable +
             p("w.destination") * prox_dest;
    }

    case TaskId::kBasketball: {
      const Vec3 ball = s.body_position("ball");
      const double d = std::max(distance(ball, s.point("left_hand")),
                                distance(ball, s.point("right_hand")));
      const double proximity = tol(task, d, "proximity");
      terms["proximity_hand"] = proximity;
      if (ep.stage == kStageCatch) {
        return p("w.catch_proximity") * proximity + p("w.catch_stable") * pt.stable;
      }
      const double aim = tol(task, distance(ball, s.point("basket")), "aim");
      terms["aim"] = aim;
      return p("w.throw_proximity") * proximity + p("w.throw_stable") * pt.stable +
             p("w.throw_aim") * aim;
    }

    case TaskId::kWindow: {
      const Vec3 tool = s.body_position("window_tool");
      const double m = p("proximity.margin");
      const double proximity =
          0.5 * (tol(task, distance(tool, s.point("left_hand")), 0.0, 0.0, m, "proximity") +
                 tol(task, distance(tool, s.point("right_hand")), 0.0, 0.0, m, "proximity"));
      const double d_window =
          tol(task, distance(s.point("head"), s.body_position("window")), "window_distance");
      const double move =
          tol(task, std::abs(s.body_velocity("wipe").z), "wipe_speed");
      const double r_manip = p("w.move") * move + p("w.proximity") * proximity +
                             p("w.stable_window") * (pt.stable * d_window);
      double contact = 0.0;
      for (int i = 0; i < 5; ++i) {
        contact += tol(task, s.site_position("wipe_contact_" + std::to_string(i)).x,
                       "contact_x");
      }
      contact /= 5.0;
      terms["proximity_tool"] = proximity;
      terms["d_window"] = d_window;
      terms["move_wipe"] = move;
      terms["r_manipulation"] = r_manip;
      terms["r_contact"] = contact;
      return p("w.manipulation") * r_manip + p("w.contact") * contact;
    }

    case TaskId::kSpoon: {
      const Vec3 spoon = s.body_position("spoon");
      const Vec3 pot = s.body_position("pot");
      const double m = p("proximity.margin");
      const double proximity =
          0.5 * (tol(task, distance(spoon, s.point("left_hand")), 0.0, 0.0, m, "proximity") +
                 tol(task, distance(spoon, s.point("right_hand")), 0.0, 0.0, m, "proximity"));
      const double phase = static_cast<double>(ep.step_index) * std::numbers::pi /
                           p("circle.steps_per_half_turn");
      const double r = p("circle.radius");
      const Vec3 dest{pot.x + r * std::cos(phase), pot.y + r * std::sin(phase), pot.z};
      const double trajectory =
          tol(task, distance(spoon, dest), 0.0, 0.0, p("trajectory.margin"), "trajectory");
      const std::vector<double>& half = p.vec("pot.half_extent");
      const double inside = (std::abs(spoon.x - pot.x) <= half[0] ? 1.0 : 0.0) +
                            (std::abs(spoon.y - pot.y) <= half[1] ? 1.0 : 0.0) +
                            (std::abs(spoon.z - pot.z) <= half[2] ? 1.0 : 0.0);
      const double r_dest = inside / 3.0;
      terms["proximity_tool"] = proximity;
      terms["r_trajectory"] = trajectory;
      terms["r_destination"] = r_dest;
      return p("w.stable") * pt.stable + p("w.proximity") * proximity +
             p("w.destination") * r_dest + p("w.trajectory") * trajectory;
    }

    case TaskId::kKitchen:
      return 0.0;

    case TaskId::kPackage: {
      const Vec3 package = s.body_position("package");
      const double d_dest = distance(package, ep.target("destination"));
      const double d_hand = distance(package, s.point("left_hand")) +
                            distance(package, s.point("right_hand"));
      const double height = std::min(1.0, package.z);
      const double success = d_dest < p("success.distance") ? 1.0 : 0.0;
      terms["d_destination"] = d_dest;
      terms["d_hand"] = d_hand;
      terms["height_package"] = height;
      terms["success"] = success;
      return -p("w.destination") * d_dest - p("w.hand") * d_hand + pt.stable +
             height + p("success.reward") * success;
    }

    case TaskId::kPowerlift: {
      const double h = tol(task, s.body_position("barbell").z, "barbell");
      terms["height_barbell"] = h;
      return p("w.stable") * pt.stable + p("w.barbell") * h;
    }

    case TaskId::kRoom: {
      std::vector<double> xs, ys;
      for (const std::string& name : room_objects(task)) {
        const Vec3 pos = s.body_position(name);
        xs.push_back(pos.x);
        ys.push_back(pos.y);
      }
      const double var = std::max(population_variance(xs), population_variance(ys));
      const double cleanness =
          tol(task, var, 0.0, 0.0, p("cleanness.margin"), "cleanness");
      terms["variance"] = var;
      terms["cleanness"] = cleanness;
      return p("w.stable") * pt.stable + p("w.cleanness") * cleanness;
    }

    case TaskId::kInsertSmall:
    case TaskId::kInsertNormal: {
      const double m = p("proximity.margin");
      auto prox = [&](const Vec3& a, const Vec3& b) {
        return tol(task, distance(a, b), 0.0, 0.0, m, "proximity");
      };
      const Vec3 peg_a = s.body_position("peg_a");
      const Vec3 peg_b = s.body_position("peg_b");
      const double block = 0.5 * (prox(peg_a, s.point("block_end_a")) +
                                  prox(peg_b, s.point("block_end_b")));
      auto peg_height = [&](const Vec3& peg) {
        return tol(task, peg.z - p("peg_height.target"), 0.0, 0.0,
                   p("peg_height.margin"), "peg_height");
      };
      const double heights = 0.5 * (peg_height(peg_a) + peg_height(peg_b));
      const double hands = 0.5 * (prox(peg_a, s.point("left_hand")) +
                                  prox(peg_b, s.point("right_hand")));
      terms["proximity_block"] = block;
      terms["height_pegs"] = heights;
      terms["proximity_hands"] = hands;
      return (p("w.stable") * pt.stable + p("w.block") * block) *
             (p("w.height") * heights + p("w.hands") * hands);
    }
  }
  throw Error("unknown task id");
}

}  // namespace

PostureTerms posture_terms(const TaskSpec& task, const WorldState& state,
                           std::span<const double> u) {
  PostureTerms t;
  t.height = tol(task, state.point("head").z, "height");
  t.upright = tol(task, state.z_proj, "upright");
  t.stand = t.height * t.upright;
  t.effort = effort_term(task, u);
  t.stable = t.stand * t.effort;
  t.still = still_term(task, state);
  return t;
}

PostureTerms posture_terms(const WorldState& state, std::span<const double> u) {
  return posture_terms(builtin_task(TaskId::kStand), state, u);
}

RewardBreakdown compute_reward(const TaskSpec& task, const WorldState& state,
                               std::span<const double> action,
                               const EpisodeState& episode) {
  require_stage(task, episode);
  RewardBreakdown r;
  const PostureTerms pt = posture_terms(task, state, action);
  r.terms["height"] = pt.height;
  r.terms["upright"] = pt.upright;
  r.terms["stand"] = pt.stand;
  r.terms["effort"] = pt.effort;
  r.terms["stable"] = pt.stable;
  r.terms["still"] = pt.still;
  r.dense = dense_reward(task, state, action, episode, pt, r.terms);
  r.sparse = episode.step_bonus;
  r.total = r.dense + r.sparse;
  for (const auto& [name, value] : r.terms) {
    if (!std::isfinite(value)) throw Error("non-finite reward term: " + name);
  }
  if (!std::isfinite(r.total)) throw Error("non-finite reward");
  return r;
}

}  // namespace hbench
