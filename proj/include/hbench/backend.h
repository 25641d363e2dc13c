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

#ifndef HBENCH_BACKEND_H_
#define HBENCH_BACKEND_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hbench/math.h"
#include "hbench/world_state.h"

namespace hbench {

// Which geometry participates in contact detection.
enum class CollisionProfile { kFull, kSimplifiedBody, kFeetOnly, kNoHands };

std::string_view to_string(CollisionProfile profile);
CollisionProfile collision_profile_from_string(std::string_view name);

enum class ControlMode { kPosition, kTorque };

std::string_view to_string(ControlMode mode);
ControlMode control_mode_from_string(std::string_view name);

inline constexpr double kDefaultSubstepDt = 0.002;
inline constexpr int kDefaultSubsteps = 10;  // 50 Hz control

struct BackendCapabilities {
  std::string engine;      // e.g. "scripted", "mujoco"
  bool synthetic = false;  // true when the dynamics are not a physics model
  double substep_dt = kDefaultSubstepDt;
  int substeps_per_control = kDefaultSubsteps;
  CollisionProfile collision_profile = CollisionProfile::kFull;
  ControlMode control_mode = ControlMode::kPosition;
  std::vector<std::string> bodies;
  std::vector<std::string> sites;

  double control_period() const { return substep_dt * substeps_per_control; }
};

// Capability report as JSON text.
std::string capabilities_json(const BackendCapabilities& caps);

// Adapter between the task kernel and a physics engine. One instance per
// episode worker; instances must not share engine state.
class PhysicsBackend {
 public:
  virtual ~PhysicsBackend() = default;

  virtual const BackendCapabilities& capabilities() const = 0;
  virtual const std::shared_ptr<const SceneLayout>& layout() const = 0;

  // Restores the scene's default configuration (robot standing, objects at
  // their default poses, zero velocities, time 0).
  virtual void reset_scene() = 0;

  // Advances `substeps` integration steps holding `controls` (one entry per
  // actuator: position targets or torques) and returns the new snapshot.
  // substeps == 0 is a no-op. Throws DivergenceError on NaN state.
  virtual WorldState step(std::span<const double> controls, int substeps) = 0;

  // Applies a world-frame force (N) to a body for the next control step.
  virtual void apply_perturbation(std::string_view body, const Vec3& force) = 0;

  virtual WorldState snapshot() const = 0;

  // Overwrites the stored fields. Throws Error on dimension mismatch.
  virtual void set_state(const WorldState& state) = 0;

  // Recomputes quantities derived from the robot coordinates and object
  // poses: robot body and site positions, z_proj, pelvis-frame velocity
  // and the contact set.
  virtual void forward() = 0;
};

}  // namespace hbench

#endif  // HBENCH_BACKEND_H_
