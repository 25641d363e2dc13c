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


#ifndef HBENCH_SCRIPTED_BACKEND_H_
#define HBENCH_SCRIPTED_BACKEND_H_

#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hbench/backend.h"
#include "hbench/robot.h"
#include "hbench/task.h"

namespace hbench {

// Scene layout for a task: the task's required bodies, sites and joints,
// robot collision geoms filtered by `profile`, and the task's obstacles.
std::shared_ptr<const SceneLayout> make_task_scene(const TaskSpec& task,
                                                   RobotVariant variant,
                                                   CollisionProfile profile);

// Axis-aligned obstacle box attached to a geom.
struct ObstacleBox {
  int geom = -1;
  Vec3 lower;
  Vec3 upper;
};

// Deterministic kinematic stand-in for a physics engine. Actuated joints
// track their commands with a first-order servo, the floating base follows
// a commanded planar drive velocity on a damped vertical spring, and large
// perturbations knock the robot over. Objects are static except the ball,
// which flies ballistically. Contacts come from simple proximity rules.
// Every quantity is a pure function of the command history.
class ScriptedBackend : public PhysicsBackend {
 public:
  // Called at the end of every control step, after derived quantities are
  // recomputed. Tests use it to move objects or inject contacts.
  using Script = std::function<void(WorldState&)>;

  ScriptedBackend(const TaskSpec& task, RobotVariant variant = RobotVariant::kFull,
                  CollisionProfile profile = CollisionProfile::kFull,
                  ControlMode mode = ControlMode::kPosition);

  const BackendCapabilities& capabilities() const override { return caps_; }
  const std::shared_ptr<const SceneLayout>& layout() const override { return layout_; }

  void reset_scene() override;
  WorldState step(std::span<const double> controls, int substeps) override;
  void apply_perturbation(std::string_view body, const Vec3& force) override;
  WorldState snapshot() const override { return state_; }
  void set_state(const WorldState& state) override;
  void forward() override;

  // Planar base velocity in the heading frame (m/s), held until changed.
  void set_drive(double forward, double lateral);
  void set_script(Script script) { script_ = std::move(script); }

  bool fallen() const { return fallen_; }
  double support_height() const { return support_height_; }

  static constexpr double kRobotMass = 50.0;          // kg
  static constexpr double kServoTimeConstant = 0.05;  // s
  static constexpr double kFallDrop = 0.2;            // m below support
  static constexpr double kFallSpeed = 1.5;           // m/s horizontal push

 private:
  void integrate_base(double dt, const Vec3& accel);
  void place_robot_sites();
  void integrate_joints(std::span<const double> controls, double dt);
  void integrate_objects(double dt);
  void compute_contacts();

  TaskId task_id_;
  RobotVariant variant_;
  RobotLandmarks landmarks_;
  BackendCapabilities caps_;
  std::shared_ptr<const SceneLayout> layout_;
  WorldState initial_;
  WorldState state_;
  Script script_;

  std::vector<ObstacleBox> obstacles_;
  std::vector<int> robot_geoms_;         // filtered by collision profile
  std::vector<PointRef> robot_geom_at_;  // point each robot geom follows
  std::vector<int> robot_sites_;         // head, imu, feet, hands
  int floor_geom_ = -1;
  int ball_geom_ = -1;
  int board_geom_ = -1;
  int pivot_geom_ = -1;
  int ball_body_ = -1;
  int pelvis_body_ = -1;
  int torso_body_ = -1;
  int block_body_ = -1;
  double block_half_length_ = 0.0;

  double support_height_ = kStandingPelvisHeight;
  double floor_height_ = 0.0;  // surface under the feet
  double drive_forward_ = 0.0;
  double drive_lateral_ = 0.0;
  Vec3 push_velocity_;         // perturbation-induced base velocity
  std::vector<Vec3> pending_force_;  // per body, for the next control step
  bool fallen_ = false;
  double fall_angle_ = 0.0;    // pitch toward the ground
  double fall_heading_ = 0.0;  // direction of the fall in the world
};

}  // namespace hbench

#endif  // HBENCH_SCRIPTED_BACKEND_H_
