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

// Kernel against the independent transcription in oracle/.

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "hbench/rollout.h"
#include "hbench/task.h"
#include "oracle/oracle.h"

namespace hbench {
namespace {

TEST_CASE("oracle tolerance matches the kernel tolerance") {
  CHECK(oracle::tol(1.5, 0.0, 1.0, 1.0) == tolerance(1.5, {0.0, 1.0}, 1.0));
  CHECK(oracle::tol(0.5, 0.0, 1.0, 0.0) == 1.0);
  CHECK(oracle::tol(2.0, 0.0, 1.0, 0.0) == 0.0);
}

TEST_CASE("every task agrees with the oracle on 10000 fuzzed states") {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t seed = 1;
  for (const TaskSpec& task : all_tasks()) {
    CAPTURE(task.name);
    const OracleDiffReport r = oracle_diff(task, 10000, seed++);
    CHECK(r.max_dense < 1e-9);
    CHECK(r.max_sparse < 1e-9);
    for (const auto& [term, err] : r.max_term) {
      CAPTURE(term);
      CHECK(err < 1e-9);
    }
    CHECK(r.termination_mismatches == 0);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 120.0);
}

// A shifted reward constant on the kernel side must show up as a nonzero
// difference; the oracle keeps its own copy of the constants.
TEST_CASE("perturbed kernel constants are detected") {
  const std::vector<std::pair<std::string, std::string>> mutations = {
      {"walk", "speed.lower"},         {"stand", "upright.margin"},
      {"run", "speed.margin"},         {"reach", "motion_penalty"},
      {"hurdle", "collision.gamma"},   {"crawl", "quat_crawl"},
      {"maze", "w.proximity"},         {"sit_simple", "posture.margin"},
      {"sit_hard", "sitting_z.lower"},       {"balance_simple", "effort.margin"},
      {"balance_hard", "effort.margin"}, {"stair", "speed.lower"},
      {"slide", "speed.lower"},        {"pole", "w.stable"},
      {"push", "alpha_h"},             {"cabinet", "w.task"},
      {"highbar", "feet.lower"},       {"door", "w.passage"},
      {"truck", "location.scale"},     {"cube", "w.orientation"},
      {"bookshelf_simple", "w.hand"},  {"bookshelf_hard", "w.hand"},
      {"basketball", "w.catch_stable"},       {"window", "w.contact"},
      {"spoon", "w.trajectory"},       {"package", "w.hand"},
      {"powerlift", "w.barbell"},      {"room", "w.stable"},
      {"insert_small", "w.block"},     {"insert_normal", "w.block"},
  };
  for (const auto& [name, param] : mutations) {
    CAPTURE(name);
    CAPTURE(param);
    TaskSpec task = find_task(name);
    REQUIRE(task.params.contains(param));
    std::vector<double> v = task.params.vec(param);
    for (double& x : v) x += 1e-3 * std::max(1.0, std::abs(x));
    task.params.set(param, v);
    const OracleDiffReport r = oracle_diff(task, 2000, 11);
    CHECK(r.max_error() > 1e-9);
  }

  TaskSpec walk = find_task("walk");
  walk.params.set("term.pelvis_height", 1.0);
  CHECK(oracle_diff(walk, 2000, 11).termination_mismatches > 0);
}

}  // namespace
}  // namespace hbench
