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


#include "hbench/hierarchy.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hbench/error.h"
#include "json.hpp"

namespace hbench {

namespace {

bool finite(const Vec3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

double activate(const std::string& kind, double x) {
  return kind == "tanh" ? std::tanh(x) : kind == "relu" ? std::max(0.0, x) : x;
}

}  // namespace

Vec3 clip(const Vec3& p, const ClipBox& box) {
  if (!finite(p)) throw Error("non-finite setpoint");
  return {std::clamp(p.x, box.lower.x, box.upper.x), std::clamp(p.y, box.lower.y, box.upper.y),
          std::clamp(p.z, box.lower.z, box.upper.z)};
}

SetpointCommand clip(const SetpointCommand& command, const ClipBox& box) {
  SetpointCommand out;
  for (const Vec3& t : command.targets) out.targets.push_back(clip(t, box));
  return out;
}

ClipBox task_clip_box(const TaskSpec& task) {
  if (!task.params.contains("hierarchy.clip_low")) {
    throw Error("task " + task.name + " has no setpoint clip box");
  }
  const std::vector<double>& lo = task.params.vec("hierarchy.clip_low");
  const std::vector<double>& hi = task.params.vec("hierarchy.clip_high");
  return {{lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]}};
}

HandMode task_hand_mode(const TaskSpec& task) {
  return task.id == TaskId::kPackage ? HandMode::kTwoHands : HandMode::kOneHand;
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

HoldPosePolicy::HoldPosePolicy(std::vector<double> action, int num_targets)
    : action_(std::move(action)), num_targets_(num_targets) {}

void HoldPosePolicy::act(std::span<const double>, std::span<const Vec3>,
                         std::span<double> action) {
  std::copy(action_.begin(), action_.end(), action.begin());
}

FunctionPolicy::FunctionPolicy(Fn fn, int observation_dim, int num_targets, int action_dim)
    : fn_(std::move(fn)),
      observation_dim_(observation_dim),
      num_targets_(num_targets),
      action_dim_(action_dim) {}

std::size_t MlpPolicy::parameter_count(const std::vector<int>& layers) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < layers.size(); ++i) {
    n += static_cast<std::size_t>(layers[i]) * layers[i - 1] + layers[i];
  }
  return n;
}

MlpPolicy::MlpPolicy(Manifest manifest, std::vector<float> params)
    : manifest_(std::move(manifest)), params_(std::move(params)) {
  const auto& l = manifest_.layers;
  if (l.size() < 2) throw Error("policy needs at least input and output layers");
  if (l.front() != manifest_.observation_dim + 3 * manifest_.num_targets) {
    throw Error("policy input width " + std::to_string(l.front()) +
                " does not match observation_dim + 3 * num_targets");
  }
  if (manifest_.num_targets < 0 || manifest_.num_targets > 2) {
    throw Error("policy num_targets must be 0, 1 or 2");
  }
  if (params_.size() != parameter_count(l)) {
    throw Error("policy has " + std::to_string(params_.size()) + " parameters, expected " +
                std::to_string(parameter_count(l)));
  }
  for (const std::string* s : {&manifest_.activation, &manifest_.output}) {
    if (*s != "tanh" && *s != "relu" && *s != "linear") {
      throw Error("unknown activation '" + *s + "'; valid: tanh, relu, linear");
    }
  }
}

MlpPolicy MlpPolicy::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open policy file " + path.string());
  std::string line;
  std::getline(in, line);
  Manifest m;
  try {
    const nlohmann::json j = nlohmann::json::parse(line);
    if (j.at("format") != "hbench-mlp") throw Error("not an hbench-mlp policy file");
    if (j.at("version") != 1) throw Error("unsupported policy file version");
    m.observation_dim = j.at("observation_dim");
    m.num_targets = j.at("num_targets");
    m.layers = j.at("layers").get<std::vector<int>>();
    m.activation = j.value("activation", "tanh");
    m.output = j.value("output", "tanh");
  } catch (const nlohmann::json::exception& e) {
    throw Error("bad policy manifest in " + path.string() + ": " + e.what());
  }
  std::vector<std::uint8_t> raw((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());
  if (raw.size() % 4 != 0) throw Error("policy parameter block is not a multiple of 4 bytes");
  std::vector<float> params(raw.size() / 4);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const std::uint32_t bits = static_cast<std::uint32_t>(raw[4 * i]) |
                               static_cast<std::uint32_t>(raw[4 * i + 1]) << 8 |
                               static_cast<std::uint32_t>(raw[4 * i + 2]) << 16 |
                               static_cast<std::uint32_t>(raw[4 * i + 3]) << 24;
    params[i] = std::bit_cast<float>(bits);
  }
  return MlpPolicy(std::move(m), std::move(params));
}

void MlpPolicy::save(const std::filesystem::path& path) const {
  nlohmann::ordered_json j;
  j["format"] = "hbench-mlp";
  j["version"] = 1;
  j["observation_dim"] = manifest_.observation_dim;
  j["num_targets"] = manifest_.num_targets;
  j["layers"] = manifest_.layers;
  j["activation"] = manifest_.activation;
  j["output"] = manifest_.output;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write policy file " + path.string());
  out << j.dump() << '\n';
  for (float f : params_) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    const char b[4] = {static_cast<char>(bits), static_cast<char>(bits >> 8),
                       static_cast<char>(bits >> 16), static_cast<char>(bits >> 24)};
    out.write(b, 4);
  }
}

std::uint64_t MlpPolicy::parameter_hash() const {
  return fnv1a({reinterpret_cast<const std::uint8_t*>(params_.data()),
                params_.size() * sizeof(float)});
}

void MlpPolicy::forward(std::span<const double> input, std::span<double> output) const {
  const auto& l = manifest_.layers;
  if (static_cast<int>(input.size()) != l.front()) {
    throw Error("policy input has " + std::to_string(input.size()) + " values, expected " +
                std::to_string(l.front()));
  }
  a_.assign(input.begin(), input.end());
  std::size_t off = 0;
  for (std::size_t k = 1; k < l.size(); ++k) {
    const int in = l[k - 1];
    const int out = l[k];
    const float* w = params_.data() + off;
    const float* bias = w + static_cast<std::size_t>(out) * in;
    off += static_cast<std::size_t>(out) * in + out;
    b_.assign(out, 0.0);
    const std::string& act = k + 1 == l.size() ? manifest_.output : manifest_.activation;
    for (int r = 0; r < out; ++r) {
      double sum = bias[r];
      for (int c = 0; c < in; ++c) sum += static_cast<double>(w[r * in + c]) * a_[c];
      b_[r] = activate(act, sum);
    }
    std::swap(a_, b_);
  }
  std::copy(a_.begin(), a_.end(), output.begin());
}

void MlpPolicy::act(std::span<const double> observation, std::span<const Vec3> targets,
                    std::span<double> action) {
  if (static_cast<int>(targets.size()) != manifest_.num_targets) {
    throw Error("policy takes " + std::to_string(manifest_.num_targets) + " targets, got " +
                std::to_string(targets.size()));
  }
  std::vector<double> input(observation.begin(), observation.end());
  for (const Vec3& t : targets) {
    input.push_back(t.x);
    input.push_back(t.y);
    input.push_back(t.z);
  }
  forward(input, action);
}

MlpSetpointPolicy::MlpSetpointPolicy(MlpPolicy mlp) : mlp_(std::move(mlp)) {
  const int out = mlp_.action_dim();
  if (out != 3 && out != 6) throw Error("setpoint policy must have 3 or 6 outputs");
  if (mlp_.num_targets() != 0) throw Error("setpoint policy must take no targets");
  out_.resize(out);
}

SetpointCommand MlpSetpointPolicy::act(std::span<const double> observation) {
  mlp_.act(observation, {}, out_);
  SetpointCommand c;
  for (std::size_t i = 0; i + 2 < out_.size(); i += 3) {
    c.targets.push_back({out_[i], out_[i + 1], out_[i + 2]});
  }
  return c;
}

ComposedPolicy::ComposedPolicy(std::shared_ptr<LowLevelPolicy> low, ClipBox box, HandMode mode,
                               int rate_ratio)
    : low_(std::move(low)), box_(box), mode_(mode), rate_ratio_(rate_ratio) {
  if (!low_) throw Error("composed policy needs a low-level policy");
  if (rate_ratio_ < 1) throw Error("rate ratio must be at least 1");
  const int want = mode_ == HandMode::kTwoHands ? 2 : 1;
  if (low_->num_targets() != want) {
    throw Error("low-level policy takes " + std::to_string(low_->num_targets()) +
                " targets; hand mode needs " + std::to_string(want));
  }
  if (!(box_.lower.x <= box_.upper.x && box_.lower.y <= box_.upper.y &&
        box_.lower.z <= box_.upper.z)) {
    throw Error("clip box lower corner exceeds upper corner");
  }
}

std::vector<double> ComposedPolicy::act(std::span<const double> observation,
                                        std::span<const double> setpoints) {
  if (static_cast<int>(setpoints.size()) != setpoint_dim()) {
    throw Error("setpoint has " + std::to_string(setpoints.size()) + " values, expected " +
                std::to_string(setpoint_dim()));
  }
  SetpointCommand c;
  for (std::size_t i = 0; i < setpoints.size(); i += 3) {
    c.targets.push_back({setpoints[i], setpoints[i + 1], setpoints[i + 2]});
  }
  return act(observation, c);
}

std::vector<double> ComposedPolicy::act(std::span<const double> observation,
                                        const SetpointCommand& command) {
  if (static_cast<int>(command.targets.size()) != setpoint_dim() / 3) {
    throw Error("setpoint command has " + std::to_string(command.targets.size()) +
                " targets, expected " + std::to_string(setpoint_dim() / 3));
  }
  if (low_->observation_dim() >= 0 &&
      static_cast<int>(observation.size()) != low_->observation_dim()) {
    throw Error("observation has " + std::to_string(observation.size()) +
                " values; low-level policy expects " + std::to_string(low_->observation_dim()));
  }
  const SetpointCommand clipped = clip(command, box_);
  if (step_ % rate_ratio_ == 0) active_ = clipped;
  ++step_;
  std::vector<double> action(low_->action_dim());
  low_->act(observation, active_.targets, action);
  for (std::size_t i = 0; i < action.size(); ++i) {
    if (!(std::abs(action[i]) <= 1.0)) {
      throw Error("low-level action entry " + std::to_string(i) + " outside [-1, 1]");
    }
  }
  return action;
}

}  // namespace hbench
