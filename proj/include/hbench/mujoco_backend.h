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


#ifndef HBENCH_MUJOCO_BACKEND_H_
#define HBENCH_MUJOCO_BACKEND_H_

#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbench/backend.h"
#include "hbench/robot.h"
#include "hbench/task.h"

struct mjModel_;
struct mjData_;

namespace hbench {

// Adapter to the MuJoCo C API. Scene files are external assets:
//
//   <scene_dir>/h1hand/<task>.xml   full, blocked and reduced robots
//   <scene_dir>/h1/<task>.xml       no_hands robot
//   <scene_dir>/names.json          optional {"<layout name>": "<MJCF name>"}
//
// The robot must be the first tree in the model, so that its joints occupy
// qpos[0, nq) and qvel[0, nv) in the robot model's order, and the model's
// actuators must match the robot's actuators in order and kind (position
// servos or motors). Task bodies, sites and object joints are looked up by
// name. Non-robot geoms join the layout group whose name prefixes theirs
// ("wall_3" joins "wall"); robot geoms join "robot".
class MujocoBackend : public PhysicsBackend {
 public:
  MujocoBackend(const TaskSpec& task, RobotVariant variant, CollisionProfile profile,
                ControlMode mode, const std::filesystem::path& scene_dir);
  ~MujocoBackend() override;
  MujocoBackend(const MujocoBackend&) = delete;
  MujocoBackend& operator=(const MujocoBackend&) = delete;

  const BackendCapabilities& capabilities() const override { return caps_; }
  const std::shared_ptr<const SceneLayout>& layout() const override { return layout_; }

  void reset_scene() override;
  WorldState step(std::span<const double> controls, int substeps) override;
  void apply_perturbation(std::string_view body, const Vec3& force) override;
  WorldState snapshot() const override { return state_; }
  void set_state(const WorldState& state) override;
  void forward() override;

 private:
  int mj_id(int type, const std::string& layout_name) const;
  void read_state();

  BackendCapabilities caps_;
  std::shared_ptr<const SceneLayout> layout_;
  mjModel_* model_ = nullptr;
  mjData_* data_ = nullptr;
  std::map<std::string, std::string> aliases_;

  std::vector<int> body_ids_;       // layout body -> MuJoCo body
  std::vector<int> body_free_qpos_;  // qpos address of a body's free joint, or -1
  std::vector<int> body_free_dof_;
  std::vector<int> site_ids_;
  std::vector<int> aux_qpos_;
  std::vector<int> aux_dof_;
  std::vector<int> geom_to_layout_;  // MuJoCo geom -> layout geom, or -1
  int pelvis_ = -1;
  int torso_ = -1;
  WorldState state_;
};

}  // namespace hbench

#endif  // HBENCH_MUJOCO_BACKEND_H_
