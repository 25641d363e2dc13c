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

#include "hbench/world_state.h"

#include <cmath>
#include <cstring>
#include <string>

#include "hbench/error.h"

namespace hbench {

namespace {

int add_named(std::vector<std::string>& names,
              std::map<std::string, int, std::less<>>& index,
              std::string name, const char* kind) {
  if (index.contains(name)) {
    throw Error(std::string("duplicate ") + kind + ": " + name);
  }
  const int id = static_cast<int>(names.size());
  index.emplace(name, id);
  names.push_back(std::move(name));
  return id;
}

std::optional<int> find_named(const std::map<std::string, int, std::less<>>& index,
                              std::string_view name) {
  auto it = index.find(name);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

template <typename T>
bool same_bits(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() &&
         (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0);
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace

int SceneLayout::add_body(std::string name) {
  return add_named(bodies_, body_index_, std::move(name), "body");
}
int SceneLayout::add_site(std::string name) {
  return add_named(sites_, site_index_, std::move(name), "site");
}
int SceneLayout::add_aux_joint(std::string name) {
  return add_named(aux_joints_, aux_index_, std::move(name), "joint");
}
int SceneLayout::add_geom(std::string name, std::string group) {
  if (geom_index_.contains(name)) throw Error("duplicate geom: " + name);
  const int id = static_cast<int>(geoms_.size());
  geom_index_.emplace(name, id);
  geoms_.push_back({std::move(name), std::move(group)});
  return id;
}

std::optional<int> SceneLayout::find_body(std::string_view name) const {
  return find_named(body_index_, name);
}
std::optional<int> SceneLayout::find_site(std::string_view name) const {
  return find_named(site_index_, name);
}
std::optional<int> SceneLayout::find_aux_joint(std::string_view name) const {
  return find_named(aux_index_, name);
}
std::optional<int> SceneLayout::find_geom(std::string_view name) const {
  return find_named(geom_index_, name);
}

int SceneLayout::body(std::string_view name) const {
  if (auto id = find_body(name)) return *id;
  throw Error("missing body: " + std::string(name));
}
int SceneLayout::site(std::string_view name) const {
  if (auto id = find_site(name)) return *id;
  throw Error("missing site: " + std::string(name));
}
int SceneLayout::aux_joint(std::string_view name) const {
  if (auto id = find_aux_joint(name)) return *id;
  throw Error("missing joint: " + std::string(name));
}

PointRef resolve_point(const SceneLayout& layout, std::string_view name) {
  if (auto id = layout.find_site(name)) return {true, *id};
  if (auto id = layout.find_body(name)) return {false, *id};
  throw Error("missing body: " + std::string(name));
}

const Vec3& WorldState::body_position(std::string_view name) const {
  return body_pos[layout->body(name)];
}
const Quat& WorldState::body_orientation(std::string_view name) const {
  return body_quat[layout->body(name)];
}
const Vec3& WorldState::body_velocity(std::string_view name) const {
  return body_linvel[layout->body(name)];
}
const Vec3& WorldState::site_position(std::string_view name) const {
  return site_pos[layout->site(name)];
}
double WorldState::aux_position(std::string_view name) const {
  return aux_pos[layout->aux_joint(name)];
}
Vec3 WorldState::point(std::string_view name) const {
  return point(resolve_point(*layout, name));
}

bool WorldState::in_contact(std::string_view group_a,
                            std::string_view group_b) const {
  const auto& geoms = layout->geoms();
  for (const Contact& c : contacts) {
    const std::string& a = geoms[c.geom_a].group;
    const std::string& b = geoms[c.geom_b].group;
    if ((a == group_a && b == group_b) || (a == group_b && b == group_a)) {
      return true;
    }
  }
  return false;
}

bool WorldState::touches(std::string_view group) const {
  const auto& geoms = layout->geoms();
  for (const Contact& c : contacts) {
    if (geoms[c.geom_a].group == group || geoms[c.geom_b].group == group) {
      return true;
    }
  }
  return false;
}

void validate(const WorldState& state) {
  if (!state.layout) throw Error("world state has no layout");
  const SceneLayout& layout = *state.layout;
  const RobotModel& robot = layout.robot();
  auto check_size = [](std::size_t got, int want, const char* what) {
    if (got != static_cast<std::size_t>(want)) {
      throw Error(std::string("dimension mismatch in ") + what + ": got " +
                  std::to_string(got) + ", expected " + std::to_string(want));
    }
  };
  check_size(state.joint_pos.size(), robot.nq(), "joint_pos");
  check_size(state.joint_vel.size(), robot.nv(), "joint_vel");
  check_size(state.body_pos.size(), layout.num_bodies(), "body_pos");
  check_size(state.body_quat.size(), layout.num_bodies(), "body_quat");
  check_size(state.body_linvel.size(), layout.num_bodies(), "body_linvel");
  check_size(state.site_pos.size(), layout.num_sites(), "site_pos");
  check_size(state.aux_pos.size(), layout.num_aux_joints(), "aux_pos");
  check_size(state.aux_vel.size(), layout.num_aux_joints(), "aux_vel");
  if (state.step_index < 0) throw Error("negative step index");

  auto finite = [](double v) { return std::isfinite(v); };
  auto finite3 = [&](const Vec3& v) {
    return finite(v.x) && finite(v.y) && finite(v.z);
  };
  for (double v : state.joint_pos) {
    if (!finite(v)) throw DivergenceError();
  }
  for (double v : state.joint_vel) {
    if (!finite(v)) throw DivergenceError();
  }
  for (std::size_t i = 0; i < state.body_pos.size(); ++i) {
    if (!finite3(state.body_pos[i]) || !finite3(state.body_linvel[i])) {
      throw DivergenceError();
    }
    const Quat& q = state.body_quat[i];
    if (!(std::abs(quat_norm(q) - 1.0) <= 1e-9)) {
      throw Error("non-unit quaternion for body " + layout.bodies()[i]);
    }
  }
  for (const Vec3& p : state.site_pos) {
    if (!finite3(p)) throw DivergenceError();
  }
  for (double v : state.aux_pos) {
    if (!finite(v)) throw DivergenceError();
  }
  for (double v : state.aux_vel) {
    if (!finite(v)) throw DivergenceError();
  }
  if (!finite(state.pelvis_frame_vel.x) || !finite(state.pelvis_frame_vel.y)) {
    throw DivergenceError();
  }
  if (!(state.z_proj >= -1.0 && state.z_proj <= 1.0)) {
    throw Error("z_proj outside [-1, 1]");
  }
  for (const Contact& c : state.contacts) {
    if (c.geom_a < 0 || c.geom_a >= layout.num_geoms() || c.geom_b < 0 ||
        c.geom_b >= layout.num_geoms()) {
      throw Error("contact references unknown geom");
    }
  }
}

WorldState make_world_state(std::shared_ptr<const SceneLayout> layout) {
  WorldState s;
  const SceneLayout& l = *layout;
  s.joint_pos = l.robot().standing_qpos();
  s.joint_vel.assign(l.robot().nv(), 0.0);
  s.body_pos.assign(l.num_bodies(), Vec3{});
  s.body_quat.assign(l.num_bodies(), Quat{});
  s.body_linvel.assign(l.num_bodies(), Vec3{});
  s.site_pos.assign(l.num_sites(), Vec3{});
  s.aux_pos.assign(l.num_aux_joints(), 0.0);
  s.aux_vel.assign(l.num_aux_joints(), 0.0);
  s.layout = std::move(layout);
  return s;
}

bool bit_identical(const WorldState& a, const WorldState& b) {
  if (a.layout != b.layout || a.step_index != b.step_index ||
      !same_bits(a.time, b.time)) {
    return false;
  }
  if (!same_bits(a.joint_pos, b.joint_pos) ||
      !same_bits(a.joint_vel, b.joint_vel) ||
      !same_bits(a.body_pos, b.body_pos) ||
      !same_bits(a.body_quat, b.body_quat) ||
      !same_bits(a.body_linvel, b.body_linvel) ||
      !same_bits(a.site_pos, b.site_pos) || !same_bits(a.aux_pos, b.aux_pos) ||
      !same_bits(a.aux_vel, b.aux_vel)) {
    return false;
  }
  if (!same_bits(a.pelvis_frame_vel.x, b.pelvis_frame_vel.x) ||
      !same_bits(a.pelvis_frame_vel.y, b.pelvis_frame_vel.y) ||
      !same_bits(a.z_proj, b.z_proj)) {
    return false;
  }
  return same_bits(a.contacts, b.contacts);
}

}  // namespace hbench
