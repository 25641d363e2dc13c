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


#include "hbench/mujoco_backend.h"

#include <mujoco/mujoco.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>

#include "hbench/error.h"
#include "hbench/scripted_backend.h"
#include "json.hpp"

namespace hbench {

namespace {

bool keep_robot_geom(const mjModel* m, int g, CollisionProfile profile) {
  const char* raw = mj_id2name(m, mjOBJ_GEOM, g);
  const std::string name = raw ? raw : "";
  auto has = [&](const char* s) { return name.find(s) != std::string::npos; };
  switch (profile) {
    case CollisionProfile::kFull:
      return true;
    case CollisionProfile::kSimplifiedBody:
      return m->geom_type[g] != mjGEOM_MESH;
    case CollisionProfile::kFeetOnly:
      return has("foot") || has("ankle");
    case CollisionProfile::kNoHands:
      return !(has("hand") || has("finger") || has("thumb") || has("palm"));
  }
  return true;
}

std::filesystem::path scene_file(const std::filesystem::path& dir, const TaskSpec& task,
                                 RobotVariant variant) {
  if (dir.empty()) throw Error("the mujoco backend needs a scene directory (--scene-dir)");
  const char* robot = variant == RobotVariant::kNoHands ? "h1" : "h1hand";
  return dir / robot / (task.name + ".xml");
}

}  // namespace

MujocoBackend::MujocoBackend(const TaskSpec& task, RobotVariant variant,
                             CollisionProfile profile, ControlMode mode,
                             const std::filesystem::path& scene_dir) {
  const std::filesystem::path path = scene_file(scene_dir, task, variant);
  std::array<char, 1024> err{};
  model_ = mj_loadXML(path.string().c_str(), nullptr, err.data(), static_cast<int>(err.size()));
  if (!model_) throw Error("cannot load scene " + path.string() + ": " + err.data());
  data_ = mj_makeData(model_);
  if (!data_) throw Error("cannot allocate simulation data for " + path.string());

  if (std::ifstream in(scene_dir / "names.json"); in) {
    try {
      aliases_ = nlohmann::json::parse(in).get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error("bad names.json in " + scene_dir.string() + ": " + e.what());
    }
  }

  // Bodies, sites and object joints come from the task's requirements; the
  // geoms come from the model.
  const std::shared_ptr<const SceneLayout> required = make_task_scene(task, variant, profile);
  auto layout = std::make_shared<SceneLayout>(required->robot());
  for (const std::string& b : required->bodies()) layout->add_body(b);
  for (const std::string& s : required->sites()) layout->add_site(s);
  for (const std::string& j : required->aux_joints()) layout->add_aux_joint(j);
  std::set<std::string> groups;
  for (const GeomInfo& g : required->geoms()) groups.insert(g.group);

  const RobotModel& robot = layout->robot();
  if (model_->nq < robot.nq() || model_->nv < robot.nv()) {
    throw Error("scene " + path.string() + " has fewer coordinates than the robot");
  }
  if (model_->nu != robot.nu()) {
    throw Error("scene " + path.string() + " has " + std::to_string(model_->nu) +
                " actuators; the robot has " + std::to_string(robot.nu()));
  }

  pelvis_ = mj_id(mjOBJ_BODY, "pelvis");
  torso_ = mj_id(mjOBJ_BODY, "torso");
  const int robot_root = model_->body_rootid[pelvis_];
  geom_to_layout_.assign(model_->ngeom, -1);
  for (int g = 0; g < model_->ngeom; ++g) {
    const char* raw = mj_id2name(model_, mjOBJ_GEOM, g);
    const std::string name = raw ? raw : "geom_" + std::to_string(g);
    const bool on_robot = model_->body_rootid[model_->geom_bodyid[g]] == robot_root;
    if (on_robot) {
      if (!keep_robot_geom(model_, g, profile)) {
        model_->geom_contype[g] = 0;
        model_->geom_conaffinity[g] = 0;
        continue;
      }
      geom_to_layout_[g] = layout->add_geom("robot_" + name, "robot");
      continue;
    }
    std::string group = model_->geom_bodyid[g] == 0 ? "floor" : "scene";
    std::size_t best = 0;
    for (const std::string& candidate : groups) {
      if (candidate != "robot" && name.rfind(candidate, 0) == 0 && candidate.size() > best) {
        group = candidate;
        best = candidate.size();
      }
    }
    geom_to_layout_[g] = layout->add_geom(name, group);
  }
  layout_ = std::move(layout);

  for (const std::string& b : layout_->bodies()) {
    const int id = mj_id(mjOBJ_BODY, b);
    body_ids_.push_back(id);
    int qpos = -1, dof = -1;
    const int j = model_->body_jntadr[id];
    if (model_->body_jntnum[id] == 1 && model_->jnt_type[j] == mjJNT_FREE) {
      qpos = model_->jnt_qposadr[j];
      dof = model_->jnt_dofadr[j];
    }
    body_free_qpos_.push_back(qpos);
    body_free_dof_.push_back(dof);
  }
  for (const std::string& s : layout_->sites()) site_ids_.push_back(mj_id(mjOBJ_SITE, s));
  for (const std::string& a : layout_->aux_joints()) {
    const int j = mj_id(mjOBJ_JOINT, a);
    if (model_->jnt_type[j] != mjJNT_HINGE && model_->jnt_type[j] != mjJNT_SLIDE) {
      throw Error("object joint " + a + " must be a hinge or slide joint");
    }
    aux_qpos_.push_back(model_->jnt_qposadr[j]);
    aux_dof_.push_back(model_->jnt_dofadr[j]);
  }

  caps_.engine = "mujoco";
  caps_.synthetic = false;
  caps_.substep_dt = model_->opt.timestep;
  caps_.substeps_per_control =
      std::max(1, static_cast<int>(std::lround(0.02 / model_->opt.timestep)));
  caps_.collision_profile = profile;
  caps_.control_mode = mode;
  caps_.bodies = layout_->bodies();
  caps_.sites = layout_->sites();

  state_ = make_world_state(layout_);
  reset_scene();
}

MujocoBackend::~MujocoBackend() {
  if (data_) mj_deleteData(data_);
  if (model_) mj_deleteModel(model_);
}

int MujocoBackend::mj_id(int type, const std::string& layout_name) const {
  auto it = aliases_.find(layout_name);
  const std::string& name = it == aliases_.end() ? layout_name : it->second;
  const int id = mj_name2id(model_, type, name.c_str());
  if (id < 0) {
    const char* kind = type == mjOBJ_BODY ? "body" : type == mjOBJ_SITE ? "site" : "joint";
    throw Error(std::string("missing ") + kind + ": " + layout_name);
  }
  return id;
}

void MujocoBackend::reset_scene() {
  const int home = mj_name2id(model_, mjOBJ_KEY, "home");
  if (home >= 0) {
    mj_resetDataKeyframe(model_, data_, home);
  } else {
    mj_resetData(model_, data_);
  }
  mj_forward(model_, data_);
  read_state();
  state_.step_index = 0;
}

void MujocoBackend::read_state() {
  const RobotModel& robot = layout_->robot();
  const mjModel* m = model_;
  const mjData* d = data_;
  state_.time = d->time;
  std::copy_n(d->qpos, robot.nq(), state_.joint_pos.begin());
  std::copy_n(d->qvel, robot.nv(), state_.joint_vel.begin());
  for (std::size_t i = 0; i < body_ids_.size(); ++i) {
    const int b = body_ids_[i];
    const mjtNum* p = d->xpos + 3 * b;
    const mjtNum* q = d->xquat + 4 * b;
    state_.body_pos[i] = {p[0], p[1], p[2]};
    state_.body_quat[i] = {q[0], q[1], q[2], q[3]};
    mjtNum vel[6];
    mj_objectVelocity(m, d, mjOBJ_BODY, b, vel, 0);
    state_.body_linvel[i] = {vel[3], vel[4], vel[5]};
  }
  for (std::size_t i = 0; i < site_ids_.size(); ++i) {
    const mjtNum* p = d->site_xpos + 3 * site_ids_[i];
    state_.site_pos[i] = {p[0], p[1], p[2]};
  }
  for (std::size_t i = 0; i < aux_qpos_.size(); ++i) {
    state_.aux_pos[i] = d->qpos[aux_qpos_[i]];
    state_.aux_vel[i] = d->qvel[aux_dof_[i]];
  }

  const mjtNum* tq = d->xquat + 4 * torso_;
  state_.z_proj = std::clamp(z_axis_projection({tq[0], tq[1], tq[2], tq[3]}), -1.0, 1.0);
  const mjtNum* pq = d->xquat + 4 * pelvis_;
  mjtNum pv[6];
  mj_objectVelocity(m, d, mjOBJ_BODY, pelvis_, pv, 0);
  const Vec3 local = rotate_inverse({pq[0], pq[1], pq[2], pq[3]}, {pv[3], pv[4], pv[5]});
  state_.pelvis_frame_vel = {local.x, local.y};

  state_.contacts.clear();
  for (int c = 0; c < d->ncon; ++c) {
    const mjContact& con = d->contact[c];
    const int a = geom_to_layout_[con.geom[0]];
    const int b = geom_to_layout_[con.geom[1]];
    if (a < 0 || b < 0) continue;
    mjtNum f[6];
    mj_contactForce(m, d, c, f);
    state_.contacts.push_back({a, b, std::abs(f[0])});
  }
}

WorldState MujocoBackend::step(std::span<const double> controls, int substeps) {
  if (static_cast<int>(controls.size()) != model_->nu) {
    throw Error("control dimension mismatch: got " + std::to_string(controls.size()) +
                ", expected " + std::to_string(model_->nu));
  }
  if (substeps < 0) throw Error("negative substep count");
  if (substeps == 0) return state_;
  std::copy(controls.begin(), controls.end(), data_->ctrl);
  for (int k = 0; k < substeps; ++k) mj_step(model_, data_);
  std::fill_n(data_->xfrc_applied, 6 * model_->nbody, 0.0);
  for (int i = 0; i < model_->nq; ++i) {
    if (!std::isfinite(data_->qpos[i])) throw DivergenceError();
  }
  for (int i = 0; i < model_->nv; ++i) {
    if (!std::isfinite(data_->qvel[i])) throw DivergenceError();
  }
  ++state_.step_index;
  read_state();
  return state_;
}

void MujocoBackend::apply_perturbation(std::string_view body, const Vec3& force) {
  const int i = layout_->body(body);
  if (!std::isfinite(force.x) || !std::isfinite(force.y) || !std::isfinite(force.z)) {
    throw Error("non-finite perturbation force");
  }
  mjtNum* f = data_->xfrc_applied + 6 * body_ids_[i];
  f[0] += force.x;
  f[1] += force.y;
  f[2] += force.z;
}

void MujocoBackend::set_state(const WorldState& s) {
  const RobotModel& robot = layout_->robot();
  if (s.joint_pos.size() != static_cast<std::size_t>(robot.nq()) ||
      s.joint_vel.size() != static_cast<std::size_t>(robot.nv()) ||
      s.body_pos.size() != body_ids_.size() || s.body_quat.size() != body_ids_.size() ||
      s.body_linvel.size() != body_ids_.size() || s.site_pos.size() != site_ids_.size() ||
      s.aux_pos.size() != aux_qpos_.size() || s.aux_vel.size() != aux_qpos_.size()) {
    throw Error("world state does not match the scene layout");
  }
  std::copy(s.joint_pos.begin(), s.joint_pos.end(), data_->qpos);
  std::copy(s.joint_vel.begin(), s.joint_vel.end(), data_->qvel);
  for (std::size_t i = 0; i < body_ids_.size(); ++i) {
    const int qa = body_free_qpos_[i];
    if (qa < 0 || qa < robot.nq()) continue;  // fixed bodies and robot links follow the joints
    mjtNum* q = data_->qpos + qa;
    const Vec3& p = s.body_pos[i];
    const Quat& r = s.body_quat[i];
    q[0] = p.x, q[1] = p.y, q[2] = p.z;
    q[3] = r.w, q[4] = r.x, q[5] = r.y, q[6] = r.z;
    mjtNum* v = data_->qvel + body_free_dof_[i];
    v[0] = s.body_linvel[i].x, v[1] = s.body_linvel[i].y, v[2] = s.body_linvel[i].z;
  }
  for (std::size_t i = 0; i < aux_qpos_.size(); ++i) {
    data_->qpos[aux_qpos_[i]] = s.aux_pos[i];
    data_->qvel[aux_dof_[i]] = s.aux_vel[i];
  }
  data_->time = s.time;
  state_.step_index = s.step_index;
  forward();
}

void MujocoBackend::forward() {
  mj_forward(model_, data_);
  read_state();
}

}  // namespace hbench
