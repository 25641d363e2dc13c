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


#include "hbench/env_pool.h"

#include <algorithm>
#include <exception>
#include <thread>

#include "hbench/error.h"

namespace hbench {

EnvPool::EnvPool(TaskSpec task, EnvOptions options, int num_envs, int num_threads,
                 BackendFactory factory)
    : num_threads_(std::max(1, num_threads)) {
  if (num_envs < 1) throw Error("env pool needs at least one env");
  for (int i = 0; i < num_envs; ++i) {
    std::unique_ptr<PhysicsBackend> backend =
        factory ? factory(task, i) : make_backend(task, options);
    envs_.push_back(std::make_unique<Environment>(task, options, std::move(backend)));
  }
  seeds_.assign(num_envs, 0);
  observations_.assign(static_cast<std::size_t>(num_envs) * observation_dim(), 0.0);
  results_.resize(num_envs);
}

void EnvPool::run_parallel(const std::function<void(int)>& fn) {
  const int n = size();
  const int workers = std::min(num_threads_, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> failures(workers);
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) fn(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const std::exception_ptr& f : failures) {
    if (f) std::rethrow_exception(f);
  }
}

void EnvPool::reset_one(int i, std::uint64_t seed) {
  seeds_[i] = seed;
  const std::vector<double> obs = envs_[i]->reset(seed);
  std::copy(obs.begin(), obs.end(), observations_.begin() + i * observation_dim());
}

void EnvPool::reset(std::uint64_t base_seed) {
  base_seed_ = base_seed;
  run_parallel([&](int i) {
    results_[i] = {};
    reset_one(i, base_seed + static_cast<std::uint64_t>(i));
  });
  started_ = true;
}

void EnvPool::step_one(int i, std::span<const double> action) {
  EnvSlotResult& r = results_[i];
  r = {};
  Environment& env = *envs_[i];
  try {
    StepResult s = env.step(action);
    r.reward = s.reward.total;
    r.dense = s.reward.dense;
    r.sparse = s.reward.sparse;
    r.done = s.termination.terminated;
    r.reason = s.termination.reason;
    if (r.done) {
      r.terminal_observation = std::move(s.observation);
    } else {
      std::copy(s.observation.begin(), s.observation.end(),
                observations_.begin() + i * observation_dim());
    }
  } catch (const Error& e) {
    r.error = true;
    r.done = true;
    r.error_message = e.what();
  }
  if (r.done) reset_one(i, seeds_[i] + static_cast<std::uint64_t>(size()));
}

const std::vector<EnvSlotResult>& EnvPool::step(std::span<const double> actions) {
  if (!started_) throw Error("env pool stepped before reset");
  const std::size_t want = static_cast<std::size_t>(size()) * action_dim();
  if (actions.size() != want) {
    throw Error("action block has " + std::to_string(actions.size()) +
                " values, expected " + std::to_string(size()) + " x " +
                std::to_string(action_dim()));
  }
  run_parallel([&](int i) {
    step_one(i, actions.subspan(static_cast<std::size_t>(i) * action_dim(), action_dim()));
  });
  return results_;
}

}  // namespace hbench
