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

#include "oracle/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hbench::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

double dist(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

double mean2(double a, double b) { return (a + b) / 2.0; }

// Shorthands for the auxiliary terms.
struct Aux {
  const WorldState& s;
  std::span<const double> u;

  double z(const char* name) const { return s.point(name).z; }
  Vec3 pos(const char* name) const { return s.point(name); }
  double vx() const { return s.pelvis_frame_vel.x; }
  double vy() const { return s.pelvis_frame_vel.y; }

  double height(double lo = 1.65, double hi = kInfinity, double m = 0.4125) const {
    return tol(z("head"), lo, hi, m);
  }
  double upright(double lo = 0.9, double hi = kInfinity, double m = 1.9) const {
    return tol(s.z_proj, lo, hi, m);
  }
  double stand() const { return height() * upright(); }
  double e() const {
    double acc = 0.0;
    for (double ui : u) acc += tol(ui, 0.0, 0.0, 10.0);
    return 0.2 * (4.0 + acc / static_cast<double>(u.size()));
  }
  double stable() const { return stand() * e(); }
  double still() const {
    return mean2(tol(vx(), 0.0, 0.0, 2.0), tol(vy(), 0.0, 0.0, 2.0));
  }
  double gamma(const char* obstacle) const {
    return s.in_contact("robot", obstacle) ? 0.1 : 1.0;
  }
};

double variance(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  if (v.size() < 2) return 0.0;
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return acc / n;
}

double quat_sq(const Quat& a, const Quat& b) {
  return (a.w - b.w) * (a.w - b.w) + (a.x - b.x) * (a.x - b.x) +
         (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z);
}

double dense(const TaskSpec& task, const WorldState& s, std::span<const double> u,
             const EpisodeState& ep, std::map<std::string, double>& terms) {
  const Aux a{s, u};
  switch (task.id) {
    case TaskId::kWalk:
      return a.stable() * tol(a.vx(), 1.0, kInfinity, 1.0);
    case TaskId::kStand:
      return a.stable() * a.still();
    case TaskId::kRun:
      return a.stable() * tol(a.vx(), 5.0, kInfinity, 5.0);
    case TaskId::kSitSimple:
    case TaskId::kSitHard: {
      const Vec3 robot = s.body_position("pelvis");
      const Vec3 chair = s.body_position("chair");
      const double sitting_x = tol(robot.x - chair.x, -0.19, 0.19, 0.2);
      const double sitting_y = tol(robot.y - chair.y, 0.0, 0.0, 0.1);
      const double sitting_z = tol(robot.z, 0.68, 0.72, 0.2);
      const double posture = tol(a.z("head") - a.z("imu"), 0.35, 0.45, 0.3);
      terms["posture"] = posture;
      return ((0.5 * sitting_z + 0.5 * sitting_x * sitting_y) * a.upright() *
              posture) * a.e() * a.still();
    }
    case TaskId::kBalanceSimple:
    case TaskId::kBalanceHard: {
      const double height_robot = a.height(2.15);
      return (a.e() * a.still()) * (height_robot * a.upright());
    }
    case TaskId::kStair:
    case TaskId::kSlide: {
      const double left = tol(a.z("head") - a.z("left_foot"), 1.2, kInfinity, 0.45);
      const double right = tol(a.z("head") - a.z("right_foot"), 1.2, kInfinity, 0.45);
      return a.e() * tol(a.vx(), 1.0, kInfinity, 1.0) * a.upright(0.5, 1.0, 1.9) *
             (left * right);
    }
    case TaskId::kPole:
      return a.gamma("pole") *
             (0.5 * a.stable() + 0.5 * tol(a.vx(), 1.0, kInfinity, 1.0));
    case TaskId::kReach: {
      const double d_hand = dist(a.pos("left_hand"), ep.target("reach"));
      const double health = 5.0 * s.z_proj;
      double penalty = 0.0;
      for (double v : s.joint_vel) penalty += v * v;
      const double close = d_hand < 1.0 ? 5.0 : 0.0;
      const double success = d_hand < 0.05 ? 10.0 : 0.0;
      return -1e-4 * penalty + health + close + success;
    }
    case TaskId::kHurdle:
      return a.stable() * tol(a.vx(), 5.0, kInfinity, 5.0) * a.gamma("wall");
    case TaskId::kCrawl: {
      const double height_crawl = a.height(0.6, 1.0, 1.0);
      const double height_imu = tol(a.z("imu"), 0.6, 1.0, 1.0);
      const Quat q = s.body_orientation("pelvis");
      const double orientation =
          tol(std::sqrt(quat_sq(q, Quat{0.75, 0.0, 0.65, 0.0})), 0.0, 0.0, 1.0);
      const double tunnel = tol(a.pos("imu").y, -1.0, 1.0, 0.0);
      const double speed = tol(a.vx(), 1.0, kInfinity, 1.0);
      return tunnel * (0.1 * a.e() + 0.25 * std::min(height_crawl, height_imu) +
                       0.25 * orientation + 0.4 * speed);
    }
    case TaskId::kMaze: {
      // Course layout is scene data.
      const std::vector<double>& cp = task.params.vec("checkpoints");
      const std::vector<double>& lv = task.params.vec("leg_velocity");
      const int count = static_cast<int>(cp.size()) / 3;
      const int idx = ep.checkpoint_index >= count ? count - 1 : ep.checkpoint_index;
      const double vtx = ep.checkpoint_index < count ? lv[2 * ep.checkpoint_index] : 0.0;
      const double vty = ep.checkpoint_index < count ? lv[2 * ep.checkpoint_index + 1] : 0.0;
      const double move = tol(a.vx() - vtx, 0.0, 0.0, std::fabs(vtx)) *
                          tol(a.vy() - vty, 0.0, 0.0, std::fabs(vty));
      const Vec3 checkpoint{cp[3 * idx], cp[3 * idx + 1], cp[3 * idx + 2]};
      const double proximity = tol(dist(checkpoint, s.body_position("pelvis")), 0.0, 0.0, 1.0);
      return (0.2 * a.stable() + 0.4 * move + 0.4 * proximity) * a.gamma("wall");
    }
    case TaskId::kPush: {
      const Vec3 box = s.body_position("box");
      const double d_goal = dist(box, ep.target("destination"));
      const double success = d_goal < 0.05 ? 1.0 : 0.0;
      const double d_hand = dist(box, a.pos("left_hand"));
      return 1000.0 * success - 1.0 * d_goal - 0.1 * d_hand;
    }
    case TaskId::kCabinet: {
      const double stable = a.stable();
      switch (ep.stage) {
        case 0:
          return 0.2 * stable + 0.8 * std::fabs(s.aux_position("cabinet_slide") / 0.4);
        case 1:
          return 0.2 * stable + 0.8 * std::fabs(s.aux_position("drawer") / 0.45);
        case 2: {
          const Vec3 c = s.body_position("cube");
          const double open_left = std::min(1.0, std::fabs(s.aux_position("hinge_left")));
          const double open_right = std::min(1.0, std::fabs(s.aux_position("hinge_right")));
          const double dx = tol(c.x - 0.9, -0.3, 0.3, 0.3);
          const double dy = tol(c.y, -0.6, 0.6, 0.3);
          const double dz = tol(c.z - 0.94, -0.15, 0.15, 0.3);
          const double r_destination = 0.3 * mean2(dx, dy) + 0.7 * dz;
          const double r3 = 0.5 * std::max(open_left, open_right) + 0.5 * r_destination;
          return 0.2 * stable + 0.8 * r3;
        }
        default: {
          const Vec3 c = s.body_position("cube");
          const double open_pull = std::min(1.0, std::fabs(s.aux_position("pullup")));
          const double dx = tol(c.x - 0.9, -0.3, 0.3, 0.3);
          const double dy = tol(c.y, -0.6, 0.6, 0.3);
          const double dz = tol(c.z - 1.54, -0.15, 0.15, 0.3);
          const double r_destination = 0.3 * mean2(dx, dy) + 0.7 * dz;
          const double r4 = 0.5 * open_pull + 0.5 * r_destination;
          return 0.2 * stable + 0.8 * r4;
        }
      }
    }
    case TaskId::kHighbar: {
      const double upright_highbar = a.upright(-kInfinity, -0.9, 1.9);
      const double feet = tol((a.z("left_foot") + a.z("right_foot")) / 2.0, 4.8, kInfinity, 2.0);
      return upright_highbar * feet * a.e();
    }
    case TaskId::kDoor: {
      const double q = s.aux_position("door_hinge");
      const double open_door = std::min(1.0, q * q);
      const double open_hatch = tol(s.aux_position("door_hatch"), 0.75, 2.0, 0.75);
      const Vec3 door = s.body_position("door");
      const double proximity_door =
          tol(std::min(dist(a.pos("left_hand"), door), dist(a.pos("right_hand"), door)),
              0.0, 0.25, 1.0);
      const double passage = tol(a.pos("imu").x, 1.2, kInfinity, 1.0);
      return 0.1 * a.stable() + 0.45 * open_door + 0.05 * open_hatch +
             0.05 * proximity_door + 0.35 * passage;
    }
    case TaskId::kTruck: {
      const int n = static_cast<int>(task.param("num_packages"));
      const Vec3 pelvis = s.body_position("pelvis");
      const Vec3 table_pos = s.point("table");
      std::vector<double> on_truck, picked, on_table;
      for (int k = 0; k < n; ++k) {
        const Vec3 p = s.body_position("package_" + std::to_string(k));
        if (ep.packages.at(k) == PackageCategory::kTruck) on_truck.push_back(dist(p, pelvis));
        if (ep.packages.at(k) == PackageCategory::kPicked) picked.push_back(dist(p, pelvis));
        if (ep.packages.at(k) == PackageCategory::kTable) on_table.push_back(dist(p, table_pos));
      }
      auto term = [](const std::vector<double>& d) {
        if (d.empty()) return 0.0;
        return tol(*std::min_element(d.begin(), d.end()), 0.0, 0.2, 4.0);
      };
      const double r_location =
          100.0 * (static_cast<double>(on_table.size()) + static_cast<double>(picked.size()) -
                   static_cast<double>(on_truck.size()));
      return r_location + a.upright() * (1.0 + term(on_truck) + term(picked) + term(on_table));
    }
    case TaskId::kCube: {
      const Quat target = ep.target_quat;
      const double err = 0.5 * (quat_sq(s.body_orientation("cube_left"), target) +
                                quat_sq(s.body_orientation("cube_right"), target));
      const double orientation = task.param("orientation_as_tolerance") != 0.0
                                     ? tol(err, 0.0, 0.0, 1.0)
                                     : err;
      const double proximity_cube =
          0.5 * (tol(dist(s.body_position("cube_left"), a.pos("left_hand")), 0.0, 0.0, 0.5) +
                 tol(dist(s.body_position("cube_right"), a.pos("right_hand")), 0.0, 0.0, 0.5));
      return 0.2 * (a.stable() * a.still()) + 0.5 * orientation + 0.3 * proximity_cube;
    }
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard: {
      const int last = static_cast<int>(ep.subtask_objects.size()) - 1;
      const int i = ep.stage > last ? last : ep.stage;
      const Vec3 object =
          s.body_position("shelf_object_" + std::to_string(ep.subtask_objects.at(i)));
      const Vec3 destination =
          s.point("shelf_destination_" + std::to_string(ep.subtask_destinations.at(i)));
      const double proximity_destination = tol(dist(object, destination), 0.0, 0.15, 1.0);
      const double d_hand =
          std::min(dist(object, a.pos("left_hand")), dist(object, a.pos("right_hand")));
      const double proximity_hand = std::exp(-d_hand);
      return 0.4 * proximity_hand + 0.2 * a.stable() + 0.4 * proximity_destination;
    }
    case TaskId::kBasketball: {
      const Vec3 ball = s.body_position("ball");
      const double proximity_hand =
          tol(std::max(dist(ball, a.pos("left_hand")), dist(ball, a.pos("right_hand"))),
              0.0, 0.2, 1.0);
      if (ep.stage == 0) return 0.5 * proximity_hand + 0.5 * a.stable();
      const double aim = tol(dist(ball, a.pos("basket")), 0.0, 0.0, 7.0);
      return 0.05 * proximity_hand + 0.15 * a.stable() + 0.8 * aim;
    }
    case TaskId::kWindow: {
      const Vec3 tool = s.body_position("window_tool");
      const double proximity_tool =
          0.5 * (tol(dist(tool, a.pos("left_hand")), 0.0, 0.0, 0.5) +
                 tol(dist(tool, a.pos("right_hand")), 0.0, 0.0, 0.5));
      const double d_window = tol(dist(a.pos("head"), s.body_position("window")), 0.4, 0.4, 0.1);
      const double move_wipe = tol(std::fabs(s.body_velocity("wipe").z), 0.5, 0.5, 0.5);
      const double r_manipulation =
          0.4 * move_wipe + 0.4 * proximity_tool + 0.2 * (a.stable() * d_window);
      double r_contact = 0.0;
      for (const char* site : {"wipe_contact_0", "wipe_contact_1", "wipe_contact_2",
                               "wipe_contact_3", "wipe_contact_4"}) {
        r_contact += tol(s.site_position(site).x, 0.92, 0.92, 0.4);
      }
      r_contact /= 5.0;
      return 0.5 * r_manipulation + 0.5 * r_contact;
    }
    case TaskId::kSpoon: {
      const double t = static_cast<double>(ep.step_index);
      const Vec3 spoon = s.body_position("spoon");
      const Vec3 pot = s.body_position("pot");
      const double proximity_tool =
          0.5 * (tol(dist(spoon, a.pos("left_hand")), 0.0, 0.0, 0.5) +
                 tol(dist(spoon, a.pos("right_hand")), 0.0, 0.0, 0.5));
      const Vec3 destination{pot.x + 0.06 * std::cos(t * kPi / 20.0),
                             pot.y + 0.06 * std::sin(t * kPi / 20.0), pot.z};
      const double r_trajectory = tol(dist(spoon, destination), 0.0, 0.0, 0.15);
      // Pot extents are scene data.
      const std::vector<double>& half = task.params.vec("pot.half_extent");
      double in_pot = 0.0;
      if (std::fabs(spoon.x - pot.x) <= half[0]) in_pot += 1.0;
      if (std::fabs(spoon.y - pot.y) <= half[1]) in_pot += 1.0;
      if (std::fabs(spoon.z - pot.z) <= half[2]) in_pot += 1.0;
      const double r_destination = in_pot / 3.0;
      return 0.15 * a.stable() + 0.25 * proximity_tool + 0.25 * r_destination +
             0.35 * r_trajectory;
    }
    case TaskId::kKitchen:
      return 0.0;
    case TaskId::kPackage: {
      const Vec3 package = s.body_position("package");
      const Vec3 destination = ep.target("destination");
      const double height_package = std::min(1.0, package.z);
      const double success = dist(package, destination) < 0.1 ? 1.0 : 0.0;
      const double d_hand = dist(package, a.pos("left_hand")) + dist(package, a.pos("right_hand"));
      return -3.0 * dist(package, destination) - 0.1 * d_hand + a.stable() + height_package +
             1000.0 * success;
    }
    case TaskId::kPowerlift:
      return 0.2 * a.stable() + 0.8 * tol(s.body_position("barbell").z, 1.9, 2.1, 2.0);
    case TaskId::kRoom: {
      const int n = static_cast<int>(task.param("num_objects"));
      std::vector<double> x, y;
      for (int k = 0; k < n; ++k) {
        const Vec3 p = s.body_position("room_object_" + std::to_string(k));
        x.push_back(p.x);
        y.push_back(p.y);
      }
      const double cleanness = tol(std::max(variance(x), variance(y)), 0.0, 0.0, 3.0);
      return 0.2 * a.stable() + 0.8 * cleanness;
    }
    case TaskId::kInsertSmall:
    case TaskId::kInsertNormal: {
      auto proximity = [](const Vec3& p, const Vec3& q) { return tol(dist(p, q), 0.0, 0.0, 0.5); };
      const Vec3 peg_a = s.body_position("peg_a");
      const Vec3 peg_b = s.body_position("peg_b");
      const double proximity_block =
          mean2(proximity(peg_a, a.pos("block_end_a")), proximity(peg_b, a.pos("block_end_b")));
      const double height_pegs =
          mean2(tol(peg_a.z - 1.1, 0.0, 0.0, 0.15), tol(peg_b.z - 1.1, 0.0, 0.0, 0.15));
      const double proximity_hands =
          mean2(proximity(peg_a, a.pos("left_hand")), proximity(peg_b, a.pos("right_hand")));
      return (0.5 * a.stable() + 0.5 * proximity_block) *
             (0.5 * height_pegs + 0.5 * proximity_hands);
    }
  }
  throw std::logic_error("oracle: unhandled task");
}

}  // namespace

double tol(double x, double lower, double upper, double margin) {
  if (x >= lower && x <= upper) return 1.0;
  if (margin == 0.0) return 0.0;
  const double d = (x < lower ? lower - x : x - upper) / margin;
  // exp(-0.5 (d * sqrt(-2 ln 0.1))^2) == 0.1^(d^2)
  return std::pow(0.1, d * d);
}

Reward reward(const TaskSpec& task, const WorldState& state,
              std::span<const double> u, const EpisodeState& episode) {
  Reward r;
  r.dense = dense(task, state, u, episode, r.terms);
  r.sparse = episode.step_bonus;
  return r;
}

TerminationStatus termination(const TaskSpec& task, const WorldState& s,
                              const EpisodeState& ep) {
  const int cap = (task.id == TaskId::kPush || task.id == TaskId::kCube ||
                   task.id == TaskId::kBasketball || task.id == TaskId::kKitchen)
                      ? 500
                      : 1000;
  const double pelvis = s.body_position("pelvis").z;
  auto z = [&](const std::string& body) { return s.body_position(body).z; };
  bool success = false;
  bool fell = false;
  bool collided = false;
  bool dropped = false;
  switch (task.id) {
    case TaskId::kWalk:
    case TaskId::kStand:
    case TaskId::kRun:
    case TaskId::kMaze:
    case TaskId::kPowerlift:
      fell = pelvis < 0.2;
      break;
    case TaskId::kSitSimple:
    case TaskId::kSitHard:
      fell = pelvis < 0.5;
      break;
    case TaskId::kBalanceSimple:
    case TaskId::kBalanceHard: {
      fell = pelvis < 0.8;
      const auto& geoms = s.layout->geoms();
      for (const Contact& c : s.contacts) {
        const std::string& ga = geoms[c.geom_a].group;
        const std::string& gb = geoms[c.geom_b].group;
        if (ga == "pivot" && gb != "floor" && gb != "board") collided = true;
        if (gb == "pivot" && ga != "floor" && ga != "board") collided = true;
        if ((ga == "board" && gb == "floor") || (ga == "floor" && gb == "board")) collided = true;
      }
      break;
    }
    case TaskId::kStair:
      fell = s.z_proj < 0.1;
      break;
    case TaskId::kSlide:
      fell = s.z_proj < 0.6;
      break;
    case TaskId::kPole:
      fell = pelvis < 0.6;
      break;
    case TaskId::kPush:
      success = dist(s.body_position("box"), ep.target("destination")) < 0.05;
      break;
    case TaskId::kCabinet:
      success = ep.completed_subtasks.size() == 4;
      break;
    case TaskId::kHighbar:
      fell = s.point("head").z < 2.0;
      break;
    case TaskId::kDoor:
    case TaskId::kSpoon:
      fell = pelvis < 0.58;
      break;
    case TaskId::kTruck:
      success = !ep.packages.empty() &&
                std::all_of(ep.packages.begin(), ep.packages.end(),
                            [](PackageCategory c) { return c == PackageCategory::kTable; });
      break;
    case TaskId::kCube:
      fell = pelvis < 0.5;
      dropped = z("cube_left") < 0.5 || z("cube_right") < 0.5;
      break;
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard: {
      fell = pelvis < 0.58;
      const int n = static_cast<int>(task.param("num_objects"));
      for (int k = 0; k < n; ++k) {
        if (z("shelf_object_" + std::to_string(k)) < 0.5) dropped = true;
      }
      success = static_cast<int>(ep.completed_subtasks.size()) ==
                static_cast<int>(task.param("num_subtasks"));
      break;
    }
    case TaskId::kBasketball:
      fell = pelvis < 0.5;
      dropped = z("ball") < 0.5;
      success = dist(s.body_position("ball"), s.point("basket")) <= 0.05;
      break;
    case TaskId::kWindow:
      fell = pelvis < 0.58;
      dropped = z("window_tool") < 0.58;
      break;
    case TaskId::kPackage:
      success = dist(s.body_position("package"), ep.target("destination")) < 0.1;
      break;
    case TaskId::kRoom:
      fell = pelvis < 0.3;
      break;
    case TaskId::kInsertSmall:
    case TaskId::kInsertNormal:
      dropped = z("block") < 0.5 || z("peg_a") < 0.5 || z("peg_b") < 0.5;
      break;
    case TaskId::kReach:
    case TaskId::kHurdle:
    case TaskId::kCrawl:
    case TaskId::kKitchen:
      break;
  }
  if (success) return {true, TerminationReason::kSuccess};
  if (fell) return {true, TerminationReason::kFailureHeight};
  if (collided) return {true, TerminationReason::kFailureCollision};
  if (dropped) return {true, TerminationReason::kObjectDropped};
  if (ep.step_index >= cap) return {true, TerminationReason::kTimeout};
  return {};
}

}  // namespace hbench::oracle
