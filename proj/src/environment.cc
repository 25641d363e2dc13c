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


#include "hbench/environment.h"

#include <algorithm>
#include <string>

#include "hbench/error.h"
#include "hbench/scripted_backend.h"
#ifdef HB_WITH_MUJOCO
#include "hbench/mujoco_backend.h"
#endif

namespace hbench {

std::unique_ptr<PhysicsBackend> make_backend(const TaskSpec& task,
                                             const EnvOptions& options) {
  if (options.backend == "scripted") {
    return std::make_unique<ScriptedBackend>(task, options.robot, options.collision_profile,
                                             options.control_mode);
  }
  if (options.backend == "mujoco" || options.backend == "engine") {
#ifdef HB_WITH_MUJOCO
    return std::make_unique<MujocoBackend>(task, options.robot, options.collision_profile,
                                           options.control_mode, options.scene_dir);
#else
    throw Error("backend '" + options.backend +
                "' is not available: rebuild with -DHB_WITH_MUJOCO=ON");
#endif
  }
  throw Error("unknown backend '" + options.backend + "'; valid: scripted, mujoco");
}

Environment::Environment(TaskSpec task, EnvOptions options,
                         std::unique_ptr<PhysicsBackend> backend)
    : task_(std::move(task)), options_(std::move(options)), backend_(std::move(backend)) {
  if (!backend_) backend_ = make_backend(task_, options_);
  obs_layout_ = hbench::observation_layout(task_, options_.robot);
  action_map_ = make_action_map(backend_->layout()->robot(), options_.robot,
                                backend_->capabilities().control_mode);
  commands_.resize(action_map_.num_actuators());
  clipped_.resize(action_map_.dim);
}

std::vector<double> Environment::reset(std::uint64_t seed) {
  episode_ = hbench::reset(task_, seed, *backend_);
  state_ = backend_->snapshot();
  needs_reset_ = false;
  return assemble_observation(state_, task_, episode_, obs_layout_);
}

StepResult Environment::step(std::span<const double> action) {
  if (needs_reset_) throw Error("episode is over or not started; call reset");
  StepResult out;
  denormalize_action(action, action_map_, commands_, &out.clamped);
  for (int i = 0; i < action_map_.dim; ++i) clipped_[i] = std::clamp(action[i], -1.0, 1.0);
  clamped_total_ += out.clamped;

  state_ = backend_->step(commands_, backend_->capabilities().substeps_per_control);
  EpisodeState next = episode_;
  ++next.step_index;
  next = advance_task_stage(task_, state_, next).episode;
  out.reward = compute_reward(task_, state_, clipped_, next);
  respawn_reach_target(task_, state_, next, backend_.get());
  out.termination = check_termination(task_, state_, next);
  episode_ = std::move(next);
  if (out.termination.terminated) needs_reset_ = true;
  out.observation = assemble_observation(state_, task_, episode_, obs_layout_);
  return out;
}

std::string Environment::manifest_json() const {
  return layout_manifest_json(task_, options_.robot, obs_layout_, action_map_);
}

}  // namespace hbench
