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

#ifndef HBENCH_WORLD_STATE_H_
#define HBENCH_WORLD_STATE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hbench/math.h"
#include "hbench/robot.h"

namespace hbench {

// Collision geometry. `group` classifies geoms for contact rules, e.g.
// "robot", "floor", "pole", "wall", "ball", "board", "pivot".
struct GeomInfo {
  std::string name;
  std::string group;
};

// Names of everything a snapshot carries. Resolved once; per-step access in
// WorldState is index based.
class SceneLayout {
 public:
  SceneLayout() = default;
  explicit SceneLayout(RobotModel robot) : robot_(std::move(robot)) {}

  const RobotModel& robot() const { return robot_; }

  int add_body(std::string name);
  int add_site(std::string name);
  int add_aux_joint(std::string name);
  int add_geom(std::string name, std::string group);

  std::optional<int> find_body(std::string_view name) const;
  std::optional<int> find_site(std::string_view name) const;
  std::optional<int> find_aux_joint(std::string_view name) const;
  std::optional<int> find_geom(std::string_view name) const;

  // Throw Error("missing body: <name>") and friends.
  int body(std::string_view name) const;
  int site(std::string_view name) const;
  int aux_joint(std::string_view name) const;

  const std::vector<std::string>& bodies() const { return bodies_; }
  const std::vector<std::string>& sites() const { return sites_; }
  const std::vector<std::string>& aux_joints() const { return aux_joints_; }
  const std::vector<GeomInfo>& geoms() const { return geoms_; }

  int num_bodies() const { return static_cast<int>(bodies_.size()); }
  int num_sites() const { return static_cast<int>(sites_.size()); }
  int num_aux_joints() const { return static_cast<int>(aux_joints_.size()); }
  int num_geoms() const { return static_cast<int>(geoms_.size()); }

 private:
  RobotModel robot_;
  std::vector<std::string> bodies_;
  std::vector<std::string> sites_;
  std::vector<std::string> aux_joints_;
  std::vector<GeomInfo> geoms_;
  std::map<std::string, int, std::less<>> body_index_;
  std::map<std::string, int, std::less<>> site_index_;
  std::map<std::string, int, std::less<>> aux_index_;
  std::map<std::string, int, std::less<>> geom_index_;
};

// Resolved handle to a point: a body origin or a site.
struct PointRef {
  bool is_site = false;
  int index = -1;
};

// Looks up a point by name, preferring sites. Throws if neither exists.
PointRef resolve_point(const SceneLayout& layout, std::string_view name);

struct Contact {
  int geom_a = -1;
  int geom_b = -1;
  double force = 0.0;  // normal force magnitude, N

  friend bool operator==(const Contact&, const Contact&) = default;
};

struct PlanarVelocity {
  double x = 0.0;  // forward, pelvis frame
  double y = 0.0;  // left, pelvis frame

  friend bool operator==(const PlanarVelocity&,
                         const PlanarVelocity&) = default;
};

// Physics snapshot at a control-step boundary.
struct WorldState {
  std::shared_ptr<const SceneLayout> layout;
  std::int64_t step_index = 0;
  double time = 0.0;

  std::vector<double> joint_pos;  // robot generalized positions
  std::vector<double> joint_vel;  // robot generalized velocities

  std::vector<Vec3> body_pos;
  std::vector<Quat> body_quat;
  std::vector<Vec3> body_linvel;  // world frame
  std::vector<Vec3> site_pos;
  std::vector<double> aux_pos;  // task object joints (doors, drawers, ...)
  std::vector<double> aux_vel;

  PlanarVelocity pelvis_frame_vel;
  double z_proj = 1.0;  // torso z-axis projected on world z

  std::vector<Contact> contacts;

  friend bool operator==(const WorldState&, const WorldState&) = default;

  // Named accessors; they throw Error naming what is missing.
  const Vec3& body_position(std::string_view name) const;
  const Quat& body_orientation(std::string_view name) const;
  const Vec3& body_velocity(std::string_view name) const;
  const Vec3& site_position(std::string_view name) const;
  double aux_position(std::string_view name) const;
  Vec3 point(std::string_view name) const;
  Vec3 point(PointRef ref) const {
    return ref.is_site ? site_pos[ref.index] : body_pos[ref.index];
  }

  // True when any contact pairs a geom of group_a with one of group_b.
  bool in_contact(std::string_view group_a, std::string_view group_b) const;
  // True when any contact involves a geom of `group`.
  bool touches(std::string_view group) const;
};

// Checks array sizes against the layout, finiteness and unit quaternions
// (to 1e-9). Throws Error describing the first violation.
void validate(const WorldState& state);

// Empty snapshot sized for the layout, robot in its standing pose.
WorldState make_world_state(std::shared_ptr<const SceneLayout> layout);

// Bitwise comparison of every stored field (distinguishes -0.0 and NaNs).
bool bit_identical(const WorldState& a, const WorldState& b);

}  // namespace hbench

#endif  // HBENCH_WORLD_STATE_H_
