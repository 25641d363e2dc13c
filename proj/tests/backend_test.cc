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

#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "hbench/environment.h"
#include "hbench/error.h"
#include "hbench/reward.h"
#include "hbench/scripted_backend.h"
#include "json.hpp"
#include "test_util.h"

namespace hbench {
namespace {

std::vector<double> hold(const PhysicsBackend& b) {
  // Position targets equal to the standing pose of every actuator.
  const RobotModel& robot = b.layout()->robot();
  const std::vector<double> q = robot.standing_qpos();
  std::vector<double> out(robot.nu());
  for (int i = 0; i < robot.nu(); ++i) out[i] = q[robot.actuated_q(i)];
  return out;
}

TEST_CASE("capabilities") {
  ScriptedBackend b(find_task("walk"), RobotVariant::kFull, CollisionProfile::kFeetOnly);
  const BackendCapabilities& c = b.capabilities();
  CHECK(c.substep_dt == 0.002);
  CHECK(c.substeps_per_control == 10);
  CHECK(c.control_period() == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(c.collision_profile == CollisionProfile::kFeetOnly);
  CHECK(c.synthetic);
  const auto j = nlohmann::json::parse(capabilities_json(c));
  CHECK(j.at("engine") == "scripted");
  CHECK(j.at("collision_profile") == "feet_only");
  CHECK(j.at("substeps_per_control") == 10);
}

TEST_CASE("collision profile names") {
  for (CollisionProfile p : {CollisionProfile::kFull, CollisionProfile::kSimplifiedBody,
                             CollisionProfile::kFeetOnly, CollisionProfile::kNoHands}) {
    CHECK(collision_profile_from_string(to_string(p)) == p);
  }
  CHECK(collision_profile_from_string("default") == CollisionProfile::kFull);
  CHECK_THROWS_WITH_AS(collision_profile_from_string("mesh"), doctest::Contains("feet_only"),
                       Error);
}

TEST_CASE("collision profiles filter the robot geoms") {
  auto robot_geoms = [](CollisionProfile p) {
    std::set<std::string> out;
    auto layout = make_task_scene(find_task("walk"), RobotVariant::kFull, p);
    for (const GeomInfo& g : layout->geoms()) {
      if (g.group == "robot") out.insert(g.name);
    }
    return out;
  };
  const auto full = robot_geoms(CollisionProfile::kFull);
  const auto feet = robot_geoms(CollisionProfile::kFeetOnly);
  const auto no_hands = robot_geoms(CollisionProfile::kNoHands);
  CHECK(feet == std::set<std::string>{"robot_left_foot", "robot_right_foot"});
  CHECK(no_hands.size() < full.size());
  CHECK(full.size() > feet.size());
  for (const std::string& g : no_hands) CHECK(g.find("hand") == std::string::npos);
}

TEST_CASE("a control step advances 0.02 s") {
  ScriptedBackend b(find_task("stand"));
  const WorldState s0 = b.snapshot();
  const WorldState s1 = b.step(hold(b), 10);
  CHECK(s1.time - s0.time == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(s1.step_index == s0.step_index + 1);
}

TEST_CASE("zero substeps is a no-op") {
  ScriptedBackend b(find_task("stand"));
  b.step(hold(b), 10);
  const WorldState before = b.snapshot();
  const WorldState after = b.step(std::vector<double>(61, 0.7), 0);
  CHECK(bit_identical(before, after));
  CHECK(bit_identical(before, b.snapshot()));
}

TEST_CASE("a 1 m/s drive moves the pelvis 0.02 m per control step") {
  ScriptedBackend b(find_task("walk"));
  b.set_drive(1.0, 0.0);
  const std::vector<double> u = hold(b);
  double x = b.snapshot().body_position("pelvis").x;
  for (int k = 0; k < 50; ++k) {
    const WorldState s = b.step(u, 10);
    const double nx = s.body_position("pelvis").x;
    REQUIRE(nx - x == doctest::Approx(0.02).epsilon(1e-9));
    x = nx;
  }
  CHECK(b.snapshot().pelvis_frame_vel.x == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("snapshots are pure and set_state round trips") {
  ScriptedBackend b(find_task("push"));
  b.step(hold(b), 10);
  const WorldState a = b.snapshot();
  CHECK(bit_identical(a, b.snapshot()));

  WorldState edited = a;
  edited.joint_pos[10] += 0.1;
  edited.body_pos[edited.layout->body("box")].x += 0.3;
  edited.aux_pos = a.aux_pos;
  b.set_state(edited);
  CHECK(bit_identical(b.snapshot(), edited));

  WorldState bad = a;
  bad.joint_pos.pop_back();
  CHECK_THROWS_AS(b.set_state(bad), Error);
  bad = a;
  bad.body_pos.push_back({});
  CHECK_THROWS_AS(b.set_state(bad), Error);
}

TEST_CASE("control dimension is checked") {
  ScriptedBackend b(find_task("walk"));
  CHECK_THROWS_WITH_AS(b.step(std::vector<double>(19, 0.0), 10),
                       doctest::Contains("expected 61"), Error);
}

TEST_CASE("zero perturbation leaves the trajectory unchanged") {
  ScriptedBackend a(find_task("walk")), b(find_task("walk"));
  const std::vector<double> u = hold(a);
  for (int k = 0; k < 30; ++k) {
    b.apply_perturbation("pelvis", {0.0, 0.0, 0.0});
    WorldState sa = a.step(u, 10);
    const WorldState sb = b.step(u, 10);
    sa.layout = sb.layout;
    REQUIRE(bit_identical(sa, sb));
  }
}

TEST_CASE("perturbation errors") {
  ScriptedBackend b(find_task("walk"));
  CHECK_THROWS_WITH_AS(b.apply_perturbation("tail", {1.0, 0.0, 0.0}),
                       doctest::Contains("tail"), Error);
  CHECK_THROWS_AS(b.apply_perturbation("pelvis", {std::nan(""), 0.0, 0.0}), Error);
}

TEST_CASE("a perturbation lasts one control step") {
  ScriptedBackend a(find_task("walk")), b(find_task("walk"));
  const std::vector<double> u = hold(a);
  b.apply_perturbation("pelvis", {0.0, 200.0, 0.0});
  const double y1 = b.step(u, 10).body_position("pelvis").y;
  a.step(u, 10);
  CHECK(y1 > 0.0);
  // No new force: the induced velocity decays instead of growing.
  const double y2 = b.step(u, 10).body_position("pelvis").y;
  const double y3 = b.step(u, 10).body_position("pelvis").y;
  CHECK(y3 - y2 < y2 - y1);
}

TEST_CASE("a large downward pelvis force ends a walk episode on height") {
  const TaskSpec& task = find_task("walk");
  Environment env(task);
  env.reset(0);
  const std::vector<double> zero(61, 0.0);
  TerminationStatus end;
  int steps = 0;
  for (; steps < task.episode_cap; ++steps) {
    env.backend().apply_perturbation("pelvis", {0.0, 0.0, -5000.0});
    const StepResult r = env.step(zero);
    if (r.termination.terminated) {
      end = r.termination;
      break;
    }
  }
  CHECK(end.reason == TerminationReason::kFailureHeight);
  CHECK(steps < 100);
  CHECK(env.state().body_position("pelvis").z < 0.2);
}

TEST_CASE("the contact set feeds the collision factor") {
  for (const char* name : {"hurdle", "pole"}) {
    CAPTURE(name);
    const TaskSpec& task = find_task(name);
    auto backend = std::make_unique<ScriptedBackend>(task);
    backend->set_drive(1.0, 0.0);
    Environment env(task, {}, std::move(backend));
    env.reset(0);
    const std::vector<double> zero(61, 0.0);
    bool hit = false;
    for (int k = 0; k < 400 && !hit; ++k) {
      const StepResult r = env.step(zero);
      hit = r.reward.terms.at("collision") < 1.0;
      if (hit) CHECK(env.state().in_contact("robot", task.id == TaskId::kPole ? "pole" : "wall"));
      if (r.termination.terminated) break;
    }
    CHECK(hit);
  }
}

TEST_CASE("balance scenes report static board and pivot contacts") {
  ScriptedBackend b(find_task("balance_hard"));
  const WorldState s = b.snapshot();
  CHECK(s.in_contact("board", "pivot"));
  CHECK(s.in_contact("pivot", "floor"));
  CHECK_FALSE(s.in_contact("board", "floor"));
}

TEST_CASE("a non-finite state is reported as divergence") {
  ScriptedBackend b(find_task("walk"));
  b.set_script([](WorldState& s) { s.joint_pos[9] = std::numeric_limits<double>::quiet_NaN(); });
  CHECK_THROWS_WITH_AS(b.step(hold(b), 10), "simulation diverged", DivergenceError);
}

TEST_CASE("the scripted backend is deterministic") {
  auto run = [] {
    ScriptedBackend b(find_task("basketball"));
    reset(find_task("basketball"), 4, b);
    std::vector<double> u(61);
    WorldState s;
    for (int k = 0; k < 200; ++k) {
      for (int i = 0; i < 61; ++i) u[i] = 0.3 * std::sin(0.1 * k + i);
      s = b.step(u, 10);
    }
    return s;
  };
  WorldState a = run();
  const WorldState b = run();
  a.layout = b.layout;
  CHECK(bit_identical(a, b));
}

TEST_CASE("engine backends are reported when not built") {
  EnvOptions opts;
  opts.backend = "mujoco";
#ifndef HB_WITH_MUJOCO
  CHECK_THROWS_WITH_AS(make_backend(find_task("walk"), opts),
                       doctest::Contains("HB_WITH_MUJOCO"), Error);
#endif
  opts.backend = "bullet";
  CHECK_THROWS_WITH_AS(make_backend(find_task("walk"), opts), doctest::Contains("scripted"),
                       Error);
}

}  // namespace
}  // namespace hbench
