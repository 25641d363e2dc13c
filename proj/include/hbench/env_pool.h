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


#ifndef HBENCH_ENV_POOL_H_
#define HBENCH_ENV_POOL_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "hbench/environment.h"

namespace hbench {

// Builds the backend for env `index`. The default uses make_backend.
using BackendFactory =
    std::function<std::unique_ptr<PhysicsBackend>(const TaskSpec& task, int index)>;

struct EnvSlotResult {
  double reward = 0.0;
  double dense = 0.0;
  double sparse = 0.0;
  bool done = false;
  bool error = false;
  TerminationReason reason = TerminationReason::kNone;
  std::string error_message;
  // Terminal observation of a finished episode; empty otherwise.
  std::vector<double> terminal_observation;
};

// N independent environments stepped as a batch. Env i starts from seed
// base + i and its k-th automatic reset uses base + i + k * n, so results
// depend only on the base seed and the action log. A worker owns a fixed
// subset of envs; per-env results never depend on the thread count.
class EnvPool {
 public:
  EnvPool(TaskSpec task, EnvOptions options, int num_envs, int num_threads = 1,
          BackendFactory factory = {});

  int size() const { return static_cast<int>(envs_.size()); }
  int observation_dim() const { return envs_.front()->observation_dim(); }
  int action_dim() const { return envs_.front()->action_dim(); }
  const Environment& env(int i) const { return *envs_[i]; }
  Environment& env(int i) { return *envs_[i]; }

  // Resets every env; env i uses base_seed + i.
  void reset(std::uint64_t base_seed);

  // `actions` holds size() × action_dim() values, row per env. Finished or
  // failed envs reset automatically; observations() then holds the first
  // observation of the new episode. Throws Error on a wrong block size.
  const std::vector<EnvSlotResult>& step(std::span<const double> actions);

  // size() × observation_dim() current observations.
  const std::vector<double>& observations() const { return observations_; }
  std::uint64_t episode_seed(int i) const { return seeds_[i]; }
  std::uint64_t base_seed() const { return base_seed_; }

 private:
  void step_one(int i, std::span<const double> action);
  void reset_one(int i, std::uint64_t seed);
  void run_parallel(const std::function<void(int)>& fn);

  std::vector<std::unique_ptr<Environment>> envs_;
  int num_threads_ = 1;
  std::uint64_t base_seed_ = 0;
  std::vector<std::uint64_t> seeds_;
  std::vector<double> observations_;
  std::vector<EnvSlotResult> results_;
  bool started_ = false;
};

}  // namespace hbench

#endif  // HBENCH_ENV_POOL_H_
