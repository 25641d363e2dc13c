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


#include "hbench/scripted_backend.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hbench/error.h"

namespace hbench {

namespace {

constexpr double kGravity = 9.81;
constexpr double kSpringOmega = 6.0;       // base vertical spring, rad/s
constexpr double kPushDecay = 0.5;         // s, upright
constexpr double kSlideDecay = 0.2;        // s, fallen robot and objects
constexpr double kFallDuration = 0.5;      // s to reach lying
constexpr double kLyingHeight = 0.1;       // pelvis above the surface
constexpr double kFootContact = 0.06;      // robot point to surface
constexpr double kObstacleSkin = 0.05;
constexpr double kBallRadius = 0.12;
constexpr double kBallReach = 0.15;        // ball to hand contact
constexpr double kObjectMass = 1.0;
constexpr double kBoardTop = 0.35;
constexpr double kHighbarPelvis = 2.6;
constexpr Vec3 kTorsoOffset{0.0, 0.0, 0.2};

// Left arm actuators: shoulder pitch, elbow. Right arm: +4.
constexpr int kLeftShoulderPitch = 11;
constexpr int kLeftElbow = 14;
constexpr int kRightShoulderPitch = 15;
constexpr int kRightElbow = 18;

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

int suffix_index(std::string_view s) {
  const std::size_t pos = s.rfind('_');
  return std::stoi(std::string(s.substr(pos + 1)));
}

Vec3 default_body_position(std::string_view name) {
  struct Entry {
    const char* name;
    Vec3 pos;
  };
  static constexpr Entry kTable[] = {
      {"chair", {0.0, 0.0, 0.45}},       {"board", {0.0, 0.0, 0.3}},
      {"pivot", {0.0, 0.0, 0.1}},        {"box", {0.75, 0.0, 0.98}},
      {"cube", {0.6, 0.4, 0.9}},         {"door", {1.0, 0.0, 1.0}},
      {"cube_left", {0.35, 0.25, 1.0}},  {"cube_right", {0.35, -0.25, 1.0}},
      {"ball", {1.5, 0.0, 1.3}},         {"window_tool", {0.4, 0.0, 1.0}},
      {"wipe", {1.0, 0.0, 1.3}},         {"window", {1.1, 0.0, 1.4}},
      {"spoon", {0.4, -0.2, 0.95}},      {"pot", {0.55, 0.1, 0.9}},
      {"kettle", {-0.23, 0.3, 1.62}},    {"package", {0.8, 0.0, 0.35}},
      {"barbell", {0.4, 0.0, 0.2}},      {"block", {0.45, 0.0, 0.95}},
      {"peg_a", {0.45, 0.25, 0.95}},     {"peg_b", {0.45, -0.25, 0.95}},
  };
  for (const Entry& e : kTable) {
    if (name == e.name) return e.pos;
  }
  if (starts_with(name, "package_")) {
    return {2.0, -0.6 + 0.4 * suffix_index(name), 1.0};
  }
  if (starts_with(name, "shelf_object_")) {
    return {0.8, -0.6 + 0.2 * suffix_index(name), 1.1};
  }
  if (starts_with(name, "room_object_")) {
    return {1.0, -1.0 + 0.4 * suffix_index(name), 0.1};
  }
  return {1.0, 0.0, 1.0};
}

Vec3 default_site_position(std::string_view name) {
  if (name == "table") return {0.0, 1.5, 0.8};
  if (name == "basket") return {2.5, 0.0, 2.6};
  if (starts_with(name, "shelf_destination_")) {
    return {0.9, -0.5 + 0.25 * suffix_index(name), 1.4};
  }
  if (starts_with(name, "wipe_contact_")) {
    return {1.05, -0.2 + 0.1 * suffix_index(name), 1.3};
  }
  return {};
}

struct Box {
  Vec3 lower;
  Vec3 upper;
};

std::vector<Box> obstacle_boxes(TaskId id) {
  switch (id) {
    case TaskId::kHurdle:
      return {{{4.0, -3.0, 0.0}, {4.05, 3.0, 0.3}},
              {{8.0, -3.0, 0.0}, {8.05, 3.0, 0.35}},
              {{12.0, -3.0, 0.0}, {12.05, 3.0, 0.4}}};
    case TaskId::kMaze:
      return {{{-1.0, -1.1, 0.0}, {4.0, -1.0, 2.0}},
              {{-1.0, 1.0, 0.0}, {2.0, 1.1, 2.0}},
              {{4.0, -1.1, 0.0}, {4.1, 7.0, 2.0}}};
    case TaskId::kPole:
      return {{{1.95, 0.45, 0.0}, {2.05, 0.55, 2.5}},
              {{1.95, -0.55, 0.0}, {2.05, -0.45, 2.5}},
              {{3.95, -0.05, 0.0}, {4.05, 0.05, 2.5}}};
    default:
      return {};
  }
}

std::string_view obstacle_group(TaskId id) {
  return id == TaskId::kPole ? "pole" : "wall";
}

double heading_of(const Quat& q) {
  return std::atan2(2.0 * (q.w * q.z + q.x * q.y), 1.0 - 2.0 * (q.y * q.y + q.z * q.z));
}

bool inside(const Vec3& p, const Vec3& lo, const Vec3& hi, double skin) {
  return p.x >= lo.x - skin && p.x <= hi.x + skin && p.y >= lo.y - skin &&
         p.y <= hi.y + skin && p.z >= lo.z - skin && p.z <= hi.z + skin;
}

template <typename T>
bool finite_all(const std::vector<T>& v) {
  for (const T& x : v) {
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(x)) return false;
    } else if constexpr (std::is_same_v<T, Vec3>) {
      if (!std::isfinite(x.x) || !std::isfinite(x.y) || !std::isfinite(x.z)) return false;
    } else {
      if (!std::isfinite(x.w) || !std::isfinite(x.x) || !std::isfinite(x.y) ||
          !std::isfinite(x.z)) {
        return false;
      }
    }
  }
  return true;
}

bool finite_state(const WorldState& s) {
  return finite_all(s.joint_pos) && finite_all(s.joint_vel) && finite_all(s.body_pos) &&
         finite_all(s.body_quat) && finite_all(s.body_linvel) && finite_all(s.site_pos) &&
         finite_all(s.aux_pos) && finite_all(s.aux_vel) && std::isfinite(s.z_proj) &&
         std::isfinite(s.pelvis_frame_vel.x) && std::isfinite(s.pelvis_frame_vel.y);
}

void check_sizes(const WorldState& s, const SceneLayout& l) {
  auto check = [](std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
      throw Error(std::string("state dimension mismatch in ") + what + ": got " +
                  std::to_string(got) + ", expected " + std::to_string(want));
    }
  };
  check(s.joint_pos.size(), l.robot().nq(), "joint_pos");
  check(s.joint_vel.size(), l.robot().nv(), "joint_vel");
  check(s.body_pos.size(), l.num_bodies(), "body_pos");
  check(s.body_quat.size(), l.num_bodies(), "body_quat");
  check(s.body_linvel.size(), l.num_bodies(), "body_linvel");
  check(s.site_pos.size(), l.num_sites(), "site_pos");
  check(s.aux_pos.size(), l.num_aux_joints(), "aux_pos");
  check(s.aux_vel.size(), l.num_aux_joints(), "aux_vel");
}

}  // namespace

std::shared_ptr<const SceneLayout> make_task_scene(const TaskSpec& task,
                                                   RobotVariant variant,
                                                   CollisionProfile profile) {
  auto layout = std::make_shared<SceneLayout>(robot_model(variant));
  const SceneRequirements req = scene_requirements(task);
  for (const std::string& b : req.bodies) layout->add_body(b);
  for (const std::string& s : req.sites) layout->add_site(s);
  for (const std::string& j : req.aux_joints) layout->add_aux_joint(j);

  layout->add_geom("floor", "floor");
  const bool hands = profile != CollisionProfile::kNoHands;
  const bool body = profile != CollisionProfile::kFeetOnly;
  if (body) {
    layout->add_geom("robot_pelvis", "robot");
    layout->add_geom("robot_torso", "robot");
    layout->add_geom("robot_head", "robot");
  }
  if (body && hands) {
    layout->add_geom("robot_left_hand", "robot");
    layout->add_geom("robot_right_hand", "robot");
  }
  layout->add_geom("robot_left_foot", "robot");
  layout->add_geom("robot_right_foot", "robot");

  const std::vector<Box> boxes = obstacle_boxes(task.id);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const std::string group(obstacle_group(task.id));
    layout->add_geom(group + "_" + std::to_string(i), group);
  }
  for (const std::string& g : req.geom_groups) {
    if (g == "board" || g == "pivot" || g == "ball") layout->add_geom(g, g);
  }
  return layout;
}

ScriptedBackend::ScriptedBackend(const TaskSpec& task, RobotVariant variant,
                                 CollisionProfile profile, ControlMode mode)
    : task_id_(task.id), variant_(variant) {
  layout_ = make_task_scene(task, variant, profile);
  const SceneLayout& l = *layout_;

  caps_.engine = "scripted";
  caps_.synthetic = true;
  caps_.collision_profile = profile;
  caps_.control_mode = mode;
  caps_.bodies = l.bodies();
  caps_.sites = l.sites();

  pelvis_body_ = l.body("pelvis");
  torso_body_ = l.body("torso");
  ball_body_ = l.find_body("ball").value_or(-1);
  block_body_ = l.find_body("block").value_or(-1);
  if (block_body_ >= 0) block_half_length_ = 0.5 * task.param("block.length");
  for (const char* s : {"head", "imu", "left_foot", "right_foot", "left_hand", "right_hand"}) {
    robot_sites_.push_back(l.site(s));
  }

  const std::vector<Box> boxes = obstacle_boxes(task.id);
  for (int g = 0; g < l.num_geoms(); ++g) {
    const GeomInfo& info = l.geoms()[g];
    if (info.group == "robot") {
      robot_geoms_.push_back(g);
      const std::string part = info.name.substr(6);  // drop "robot_"
      if (part == "pelvis" || part == "torso") {
        robot_geom_at_.push_back({false, l.body(part)});
      } else {
        robot_geom_at_.push_back({true, l.site(part)});
      }
    } else if (info.name == "floor") {
      floor_geom_ = g;
    } else if (info.name == "ball") {
      ball_geom_ = g;
    } else if (info.name == "board") {
      board_geom_ = g;
    } else if (info.name == "pivot") {
      pivot_geom_ = g;
    } else if (info.group == "wall" || info.group == "pole") {
      const Box& b = boxes[obstacles_.size()];
      obstacles_.push_back({g, b.lower, b.upper});
    }
  }

  if (board_geom_ >= 0) {
    floor_height_ = kBoardTop;
    support_height_ = kStandingPelvisHeight + kBoardTop;
  } else if (task.id == TaskId::kHighbar) {
    support_height_ = kHighbarPelvis;
  }

  state_ = make_world_state(layout_);
  state_.joint_pos[2] = support_height_;
  for (int b = 0; b < l.num_bodies(); ++b) {
    if (b != pelvis_body_ && b != torso_body_) {
      state_.body_pos[b] = default_body_position(l.bodies()[b]);
    }
  }
  for (int s = 0; s < l.num_sites(); ++s) {
    state_.site_pos[s] = default_site_position(l.sites()[s]);
  }
  pending_force_.assign(l.num_bodies(), Vec3{});
  forward();
  initial_ = state_;
}

void ScriptedBackend::reset_scene() {
  state_ = initial_;
  push_velocity_ = {};
  std::fill(pending_force_.begin(), pending_force_.end(), Vec3{});
  fallen_ = false;
  fall_angle_ = 0.0;
  fall_heading_ = 0.0;
}

void ScriptedBackend::set_drive(double forward, double lateral) {
  drive_forward_ = forward;
  drive_lateral_ = lateral;
}

void ScriptedBackend::set_state(const WorldState& state) {
  check_sizes(state, *layout_);
  for (const Contact& c : state.contacts) {
    if (c.geom_a < 0 || c.geom_a >= layout_->num_geoms() || c.geom_b < 0 ||
        c.geom_b >= layout_->num_geoms()) {
      throw Error("contact references unknown geom");
    }
  }
  std::shared_ptr<const SceneLayout> keep = layout_;
  state_ = state;
  state_.layout = std::move(keep);
}

void ScriptedBackend::apply_perturbation(std::string_view body, const Vec3& force) {
  const int id = layout_->body(body);
  if (!std::isfinite(force.x) || !std::isfinite(force.y) || !std::isfinite(force.z)) {
    throw Error("non-finite perturbation force");
  }
  pending_force_[id] = pending_force_[id] + force;
}

WorldState ScriptedBackend::step(std::span<const double> controls, int substeps) {
  if (static_cast<int>(controls.size()) != layout_->robot().nu()) {
    throw Error("control dimension mismatch: got " + std::to_string(controls.size()) +
                ", expected " + std::to_string(layout_->robot().nu()));
  }
  if (substeps < 0) throw Error("negative substep count");
  if (substeps == 0) return state_;

  Vec3 base_force = pending_force_[pelvis_body_] + pending_force_[torso_body_];
  const Vec3 base_accel = (1.0 / kRobotMass) * base_force;
  const double dt = caps_.substep_dt;
  for (int k = 0; k < substeps; ++k) {
    integrate_joints(controls, dt);
    integrate_base(dt, base_accel);
    for (int b = 0; b < layout_->num_bodies(); ++b) {
      if (b == pelvis_body_ || b == torso_body_) continue;
      state_.body_linvel[b] =
          state_.body_linvel[b] + (dt / kObjectMass) * pending_force_[b];
    }
    integrate_objects(dt);
    state_.time += dt;
  }
  std::fill(pending_force_.begin(), pending_force_.end(), Vec3{});
  ++state_.step_index;
  forward();
  if (script_) script_(state_);
  if (!finite_state(state_)) throw DivergenceError();
  return state_;
}

void ScriptedBackend::integrate_joints(std::span<const double> controls, double dt) {
  const RobotModel& robot = layout_->robot();
  const double keep = std::exp(-dt / kServoTimeConstant);
  for (int i = 0; i < robot.nu(); ++i) {
    const int qi = robot.actuated_q(i);
    const int vi = robot.actuated_v(i);
    const double q = state_.joint_pos[qi];
    double q_new;
    if (caps_.control_mode == ControlMode::kPosition) {
      q_new = controls[i] + (q - controls[i]) * keep;
    } else {
      const ActuatorSpec& act = robot.actuators[i];
      double& qd = state_.joint_vel[vi];
      qd += dt * (20.0 * controls[i] / act.torque_limit - 5.0 * qd);
      q_new = std::clamp(q + dt * qd, act.lower, act.upper);
    }
    state_.joint_vel[vi] = (q_new - q) / dt;
    state_.joint_pos[qi] = q_new;
  }
}

void ScriptedBackend::integrate_base(double dt, const Vec3& accel) {
  std::vector<double>& q = state_.joint_pos;
  std::vector<double>& v = state_.joint_vel;
  push_velocity_ = push_velocity_ + dt * accel;
  Vec3 vel;
  if (!fallen_) {
    const Quat orient{q[3], q[4], q[5], q[6]};
    const Vec3 drive = rotate(yaw_quat(heading_of(orient)),
                              Vec3{drive_forward_, drive_lateral_, 0.0});
    const double decay = std::exp(-dt / kPushDecay);
    push_velocity_.x *= decay;
    push_velocity_.y *= decay;
    const double w = kSpringOmega;
    push_velocity_.z += dt * (-w * w * (q[2] - support_height_) - 2.0 * w * push_velocity_.z);
    vel = {drive.x + push_velocity_.x, drive.y + push_velocity_.y, push_velocity_.z};
    const double push_xy = std::hypot(push_velocity_.x, push_velocity_.y);
    if (q[2] + dt * vel.z < support_height_ - kFallDrop || push_xy > kFallSpeed) {
      fallen_ = true;
      fall_heading_ = push_xy > 1e-9 ? std::atan2(push_velocity_.y, push_velocity_.x)
                                     : heading_of(orient);
    }
    v[3] = v[4] = v[5] = 0.0;
  } else {
    const double decay = std::exp(-dt / kSlideDecay);
    push_velocity_.x *= decay;
    push_velocity_.y *= decay;
    push_velocity_.z -= dt * kGravity;
    vel = push_velocity_;
    const double rate = 0.5 * std::numbers::pi / kFallDuration;
    const double angle = std::min(fall_angle_ + dt * rate, 0.5 * std::numbers::pi);
    v[3] = 0.0;
    v[4] = (angle - fall_angle_) / dt;
    v[5] = 0.0;
    fall_angle_ = angle;
    const Quat tilt{std::cos(0.5 * angle), 0.0, std::sin(0.5 * angle), 0.0};
    const Quat orient = normalized(yaw_quat(fall_heading_) * tilt);
    q[3] = orient.w;
    q[4] = orient.x;
    q[5] = orient.y;
    q[6] = orient.z;
  }
  q[0] += dt * vel.x;
  q[1] += dt * vel.y;
  q[2] += dt * vel.z;
  const double rest = floor_height_ + kLyingHeight;
  if (fallen_ && q[2] <= rest) {
    q[2] = rest;
    push_velocity_.z = 0.0;
    vel.z = 0.0;
  }
  v[0] = vel.x;
  v[1] = vel.y;
  v[2] = vel.z;
}

void ScriptedBackend::integrate_objects(double dt) {
  const double decay = std::exp(-dt / kSlideDecay);
  for (int b = 0; b < layout_->num_bodies(); ++b) {
    if (b == pelvis_body_ || b == torso_body_) continue;
    Vec3& p = state_.body_pos[b];
    Vec3& v = state_.body_linvel[b];
    if (b == ball_body_) {
      if (p.z <= kBallRadius && v.z <= 0.0) {
        p.z = kBallRadius;
        v = {};
        continue;
      }
      v.z -= dt * kGravity;
      p = p + dt * v;
      if (p.z < kBallRadius) {
        p.z = kBallRadius;
        v = {};
      }
    } else {
      p = p + dt * v;
      v = decay * v;
    }
  }
}

void ScriptedBackend::place_robot_sites() {
  const RobotModel& robot = layout_->robot();
  const std::vector<double>& q = state_.joint_pos;
  const Vec3 pelvis{q[0], q[1], q[2]};
  const Quat orient{q[3], q[4], q[5], q[6]};
  auto at = [&](const Vec3& offset) { return pelvis + rotate(orient, offset); };
  std::vector<Vec3>& site = state_.site_pos;
  site[robot_sites_[0]] = at(landmarks_.head);
  site[robot_sites_[1]] = at(landmarks_.imu);
  site[robot_sites_[2]] = at(landmarks_.left_foot);
  site[robot_sites_[3]] = at(landmarks_.right_foot);
  // Planar two-link arms in the sagittal plane; negative shoulder pitch
  // raises the arm forward.
  auto hand = [&](const Vec3& shoulder, int pitch_act, int elbow_act) {
    const double a1 = -q[robot.actuated_q(pitch_act)];
    const double a2 = a1 + q[robot.actuated_q(elbow_act)];
    const Vec3 offset =
        shoulder + Vec3{landmarks_.upper_arm * std::sin(a1) + landmarks_.forearm * std::sin(a2),
                        0.0,
                        -landmarks_.upper_arm * std::cos(a1) - landmarks_.forearm * std::cos(a2)};
    return at(offset);
  };
  site[robot_sites_[4]] = hand(landmarks_.left_shoulder, kLeftShoulderPitch, kLeftElbow);
  site[robot_sites_[5]] = hand(landmarks_.right_shoulder, kRightShoulderPitch, kRightElbow);
}

void ScriptedBackend::forward() {
  const std::vector<double>& q = state_.joint_pos;
  const std::vector<double>& v = state_.joint_vel;
  const Vec3 pelvis{q[0], q[1], q[2]};
  const Quat orient{q[3], q[4], q[5], q[6]};
  const Vec3 vel{v[0], v[1], v[2]};
  state_.body_pos[pelvis_body_] = pelvis;
  state_.body_quat[pelvis_body_] = orient;
  state_.body_linvel[pelvis_body_] = vel;
  state_.body_pos[torso_body_] = pelvis + rotate(orient, kTorsoOffset);
  state_.body_quat[torso_body_] = orient;
  state_.body_linvel[torso_body_] = vel;
  place_robot_sites();
  if (block_body_ >= 0) {
    const Vec3& c = state_.body_pos[block_body_];
    const Quat& r = state_.body_quat[block_body_];
    const Vec3 half = rotate(r, Vec3{block_half_length_, 0.0, 0.0});
    state_.site_pos[layout_->site("block_end_a")] = c + half;
    state_.site_pos[layout_->site("block_end_b")] = c - half;
  }
  state_.z_proj = std::clamp(z_axis_projection(orient), -1.0, 1.0);
  const Vec3 local = rotate_inverse(orient, vel);
  state_.pelvis_frame_vel = {local.x, local.y};
  compute_contacts();
}

void ScriptedBackend::compute_contacts() {
  std::vector<Contact>& out = state_.contacts;
  out.clear();
  const int surface = board_geom_ >= 0 ? board_geom_ : floor_geom_;
  for (std::size_t i = 0; i < robot_geoms_.size(); ++i) {
    const Vec3 p = state_.point(robot_geom_at_[i]);
    const int g = robot_geoms_[i];
    const bool on_board =
        board_geom_ >= 0 && std::abs(p.x) < 1.0 && std::abs(p.y) < 1.0;
    if (p.z < (on_board ? kBoardTop : 0.0) + kFootContact) {
      out.push_back({g, on_board ? surface : floor_geom_, 0.0});
    }
    for (const ObstacleBox& box : obstacles_) {
      if (inside(p, box.lower, box.upper, kObstacleSkin)) out.push_back({g, box.geom, 0.0});
    }
    if (ball_geom_ >= 0 &&
        distance(p, state_.body_pos[ball_body_]) < kBallReach) {
      out.push_back({g, ball_geom_, 0.0});
    }
  }
  if (board_geom_ >= 0 && pivot_geom_ >= 0) {
    out.push_back({board_geom_, pivot_geom_, 0.0});
    out.push_back({pivot_geom_, floor_geom_, 0.0});
  }
  if (ball_geom_ >= 0 && state_.body_pos[ball_body_].z <= kBallRadius) {
    out.push_back({ball_geom_, floor_geom_, 0.0});
  }
}

}  // namespace hbench
