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


#ifndef HBENCH_HIERARCHY_H_
#define HBENCH_HIERARCHY_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbench/math.h"
#include "hbench/task.h"

namespace hbench {

// Axis-aligned workspace for reaching setpoints.
struct ClipBox {
  Vec3 lower;
  Vec3 upper;
};

// Nearest point of the box. Throws Error on a non-finite point.
Vec3 clip(const Vec3& p, const ClipBox& box);

enum class HandMode { kOneHand, kTwoHands };

// Left hand target, plus the right hand target in two-hand mode.
struct SetpointCommand {
  std::vector<Vec3> targets;
};

SetpointCommand clip(const SetpointCommand& command, const ClipBox& box);

// The task's clip box (hierarchy.clip_low/high) and hand mode: one hand for
// push, two for package. Throws Error for tasks without a clip box.
ClipBox task_clip_box(const TaskSpec& task);
HandMode task_hand_mode(const TaskSpec& task);

// Maps (observation, hand targets) to a normalized action.
class LowLevelPolicy {
 public:
  virtual ~LowLevelPolicy() = default;
  virtual int observation_dim() const = 0;  // -1 accepts any length
  virtual int num_targets() const = 0;      // 0, 1 or 2
  virtual int action_dim() const = 0;
  virtual void act(std::span<const double> observation, std::span<const Vec3> targets,
                   std::span<double> action) = 0;
  virtual bool frozen() const { return true; }
  // FNV-1a over the parameter bytes; 0 for parameter-free policies.
  virtual std::uint64_t parameter_hash() const { return 0; }
};

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes);

// Fixed output regardless of inputs.
class HoldPosePolicy : public LowLevelPolicy {
 public:
  HoldPosePolicy(std::vector<double> action, int num_targets);
  int observation_dim() const override { return -1; }
  int num_targets() const override { return num_targets_; }
  int action_dim() const override { return static_cast<int>(action_.size()); }
  void act(std::span<const double>, std::span<const Vec3>, std::span<double> action) override;

 private:
  std::vector<double> action_;
  int num_targets_;
};

// Wraps a callable; used for scripted controllers.
class FunctionPolicy : public LowLevelPolicy {
 public:
  using Fn = std::function<void(std::span<const double>, std::span<const Vec3>,
                                std::span<double>)>;
  FunctionPolicy(Fn fn, int observation_dim, int num_targets, int action_dim);
  int observation_dim() const override { return observation_dim_; }
  int num_targets() const override { return num_targets_; }
  int action_dim() const override { return action_dim_; }
  void act(std::span<const double> observation, std::span<const Vec3> targets,
           std::span<double> action) override {
    fn_(observation, targets, action);
  }

 private:
  Fn fn_;
  int observation_dim_;
  int num_targets_;
  int action_dim_;
};

// Multilayer perceptron read from a policy file: one JSON manifest line
// followed by little-endian f32 parameters. Input is the observation
// followed by the target coordinates.
class MlpPolicy : public LowLevelPolicy {
 public:
  struct Manifest {
    int observation_dim = 0;
    int num_targets = 1;
    std::vector<int> layers;  // input, hidden..., output
    std::string activation = "tanh";
    std::string output = "tanh";  // "tanh" or "linear"
  };

  MlpPolicy(Manifest manifest, std::vector<float> params);
  static MlpPolicy load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  // Expected parameter count for a layer list.
  static std::size_t parameter_count(const std::vector<int>& layers);

  int observation_dim() const override { return manifest_.observation_dim; }
  int num_targets() const override { return manifest_.num_targets; }
  int action_dim() const override { return manifest_.layers.back(); }
  void act(std::span<const double> observation, std::span<const Vec3> targets,
           std::span<double> action) override;
  bool frozen() const override { return true; }
  std::uint64_t parameter_hash() const override;

  const Manifest& manifest() const { return manifest_; }
  const std::vector<float>& parameters() const { return params_; }
  // Plain forward pass on a full input vector.
  void forward(std::span<const double> input, std::span<double> output) const;

 private:
  Manifest manifest_;
  const std::vector<float> params_;
  mutable std::vector<double> a_, b_;
};

// Produces setpoints from the task observation.
class HighLevelPolicy {
 public:
  virtual ~HighLevelPolicy() = default;
  virtual SetpointCommand act(std::span<const double> observation) = 0;
};

// High-level policy that emits raw setpoint coordinates through an MLP with
// 3 or 6 outputs (meters).
class MlpSetpointPolicy : public HighLevelPolicy {
 public:
  explicit MlpSetpointPolicy(MlpPolicy mlp);
  SetpointCommand act(std::span<const double> observation) override;

 private:
  MlpPolicy mlp_;
  std::vector<double> out_;
};

// Environment-facing composition of a high-level setpoint source with a
// frozen low-level policy. Setpoints are clipped into the box and refreshed
// every `rate_ratio` low-level steps.
class ComposedPolicy {
 public:
  ComposedPolicy(std::shared_ptr<LowLevelPolicy> low, ClipBox box, HandMode mode,
                 int rate_ratio = 1);

  // Dimension of the high-level action: 3 per commanded hand.
  int setpoint_dim() const { return mode_ == HandMode::kTwoHands ? 6 : 3; }
  int action_dim() const { return low_->action_dim(); }

  // One control step from raw setpoint coordinates. Throws Error on a NaN
  // setpoint, a dimension mismatch or an out-of-range low-level action.
  std::vector<double> act(std::span<const double> observation,
                          std::span<const double> setpoints);
  std::vector<double> act(std::span<const double> observation, const SetpointCommand& command);

  // Targets passed to the low-level policy on the latest step.
  const SetpointCommand& active() const { return active_; }
  void reset() { step_ = 0; }
  const LowLevelPolicy& low() const { return *low_; }

 private:
  std::shared_ptr<LowLevelPolicy> low_;
  ClipBox box_;
  HandMode mode_;
  int rate_ratio_;
  std::int64_t step_ = 0;
  SetpointCommand active_;
};

}  // namespace hbench

#endif  // HBENCH_HIERARCHY_H_
