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


// Acceptance runner: one PASS/FAIL line per primary criterion. Criteria
// that need a physics engine run under --engine-only, which exits 77 when
// the engine adapter is not built.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hbench/env_pool.h"
#include "hbench/environment.h"
#include "hbench/episode.h"
#include "hbench/hierarchy.h"
#include "hbench/observation.h"
#include "hbench/protocol.h"
#include "hbench/reward.h"
#include "hbench/rng.h"
#include "hbench/rollout.h"
#include "hbench/scripted_backend.h"
#include "hbench/server.h"
#include "hbench/task.h"
#include "hbench/tolerance.h"
#include "test_util.h"

namespace hbench {
namespace {

using Clock = std::chrono::steady_clock;
using testing::make_scene;
using testing::Scene;
using testing::set_aux;
using testing::set_point;

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Collects failed sub-checks for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    failed_ += !ok;
  }
  Outcome outcome(const std::string& summary) const {
    if (failed_ == 0) return {Status::kPass, summary + fmt(", %d checks", count_)};
    std::string d = summary + fmt(", %d of %d checks failed:", failed_, count_);
    for (const std::string& f : failures_) d += " [" + f + "]";
    return {Status::kFail, d};
  }

 private:
  int count_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
};

// --- tolerance -------------------------------------------------------------

Outcome tolerance_suite() {
  const auto start = Clock::now();
  Rng rng(2024);
  Checks c;
  const ToleranceShape shape;  // gaussian, 0.1 at the margin
  double worst_margin = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double lo = rng.uniform(-5.0, 5.0);
    const double hi = lo + rng.uniform(0.0, 3.0);
    const double margin = rng.uniform(0.01, 4.0);
    const double inside = rng.uniform(lo, hi);
    c.expect(tolerance(inside, {lo, hi}, margin, shape) == 1.0, "inside != 1");
    const bool above = rng.uniform() < 0.5;
    const double edge = above ? hi + margin : lo - margin;
    worst_margin = std::max(worst_margin, std::abs(tolerance(edge, {lo, hi}, margin, shape) - 0.1));
    const double d1 = rng.uniform(0.0, 3.0 * margin);
    const double d2 = d1 + rng.uniform(1e-6, margin);
    const double v1 = tolerance(above ? hi + d1 : lo - d1, {lo, hi}, margin, shape);
    const double v2 = tolerance(above ? hi + d2 : lo - d2, {lo, hi}, margin, shape);
    c.expect(v2 <= v1 && (v1 == 0.0 || v2 < v1 || d1 == 0.0), "not monotone");
  }
  c.expect(worst_margin <= 1e-12, fmt("margin error %.3g", worst_margin));
  const double t = seconds_since(start);
  c.expect(t < 1.0, fmt("runtime %.3f s", t));
  return c.outcome(fmt("10000 cases, max |tol(margin) - 0.1| = %.2g, %.3f s", worst_margin, t));
}

// --- oracle ----------------------------------------------------------------

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  Checks c;
  double worst = 0.0;
  std::string worst_task;
  int mismatches = 0;
  std::uint64_t seed = 1;
  for (const TaskSpec& task : all_tasks()) {
    const OracleDiffReport r = oracle_diff(task, 10000, seed++);
    if (r.max_error() > worst) {
      worst = r.max_error();
      worst_task = task.name;
    }
    mismatches += r.termination_mismatches;
    c.expect(r.max_error() < 1e-9, task.name + fmt(" max error %.3g", r.max_error()));
    c.expect(r.termination_mismatches == 0, task.name + " termination mismatch");
  }
  const double t = seconds_since(start);
  c.expect(t < 120.0, fmt("runtime %.1f s", t));
  return c.outcome(fmt("%zu task variants x 10000 states, max |d| = %.2g%s%s, termination "
                       "mismatches %d, %.1f s",
                       all_tasks().size(), worst, worst_task.empty() ? "" : " on ",
                       worst_task.c_str(), mismatches, t));
}

// --- termination and staging -----------------------------------------------

TerminationStatus status(const Scene& sc, std::int64_t step = 1) {
  EpisodeState ep = sc.episode;
  ep.step_index = step;
  return check_termination(sc.task, sc.state, ep);
}

double advance(Scene& sc) {
  StageUpdate u = advance_task_stage(sc.task, sc.state, sc.episode);
  sc.episode = u.episode;
  return u.bonus;
}

void set_z(WorldState& s, std::string_view name, double z) {
  Vec3 p = s.point(name);
  p.z = z;
  set_point(s, name, p);
}

struct Threshold {
  const char* task;
  const char* point;
  double value;
  TerminationReason reason;
};

constexpr auto kFell = TerminationReason::kFailureHeight;
constexpr auto kDropped = TerminationReason::kObjectDropped;

const Threshold kThresholds[] = {
    {"walk", "pelvis", 0.2, kFell},           {"stand", "pelvis", 0.2, kFell},
    {"run", "pelvis", 0.2, kFell},            {"maze", "pelvis", 0.2, kFell},
    {"powerlift", "pelvis", 0.2, kFell},      {"room", "pelvis", 0.3, kFell},
    {"sit_simple", "pelvis", 0.5, kFell},     {"sit_hard", "pelvis", 0.5, kFell},
    {"cube", "pelvis", 0.5, kFell},           {"basketball", "pelvis", 0.5, kFell},
    {"door", "pelvis", 0.58, kFell},          {"bookshelf_simple", "pelvis", 0.58, kFell},
    {"bookshelf_hard", "pelvis", 0.58, kFell}, {"window", "pelvis", 0.58, kFell},
    {"spoon", "pelvis", 0.58, kFell},         {"pole", "pelvis", 0.6, kFell},
    {"balance_simple", "pelvis", 0.8, kFell}, {"balance_hard", "pelvis", 0.8, kFell},
    {"cube", "cube_left", 0.5, kDropped},     {"basketball", "ball", 0.5, kDropped},
    {"window", "window_tool", 0.58, kDropped}, {"insert_small", "block", 0.5, kDropped},
    {"bookshelf_simple", "shelf_object_0", 0.5, kDropped},
};

void check_caps_and_thresholds(Checks& c) {
  for (const TaskSpec& task : all_tasks()) {
    const bool short_cap = task.name == "push" || task.name == "cube" ||
                           task.name == "basketball" || task.name == "kitchen";
    const int cap = short_cap ? 500 : 1000;
    const Scene sc = make_scene(task.name);
    c.expect(task.episode_cap == cap, task.name + " cap");
    c.expect(!status(sc, cap - 1).terminated, task.name + " ends before the cap");
    c.expect(status(sc, cap).reason == TerminationReason::kTimeout, task.name + " cap not fired");
  }
  for (const Threshold& t : kThresholds) {
    Scene sc = make_scene(t.task);
    set_z(sc.state, t.point, t.value);
    c.expect(!status(sc).terminated, std::string(t.task) + " fires at the threshold");
    set_z(sc.state, t.point, std::nextafter(t.value, 0.0));
    c.expect(status(sc).reason == t.reason, std::string(t.task) + " threshold " + t.point);
  }
  {
    Scene sc = make_scene("push");
    const Vec3 dest = sc.episode.target("destination");
    set_point(sc.state, "box", dest + Vec3{0.05, 0.0, 0.0});
    c.expect(!status(sc).terminated, "push at 0.05");
    set_point(sc.state, "box", dest + Vec3{0.0499, 0.0, 0.0});
    c.expect(status(sc).reason == TerminationReason::kSuccess, "push below 0.05");
  }
  {
    Scene sc = make_scene("package");
    const Vec3 dest = sc.episode.target("destination");
    set_point(sc.state, "package", dest + Vec3{0.0, 0.0, 0.1001});
    c.expect(!status(sc).terminated, "package above 0.1");
    set_point(sc.state, "package", dest + Vec3{0.0, 0.0, 0.0999});
    c.expect(status(sc).reason == TerminationReason::kSuccess, "package below 0.1");
  }
}

void check_bonus_schedules(Checks& c) {
  {
    Scene sc = make_scene("cabinet");
    set_aux(sc.state, "cabinet_slide", 0.4);
    c.expect(advance(sc) == 100.0, "cabinet 1");
    c.expect(advance(sc) == 0.0, "cabinet 1 paid twice");
    set_aux(sc.state, "drawer", 0.45);
    c.expect(advance(sc) == 200.0, "cabinet 2");
    const double x = sc.task.param("destination.x_center");
    set_point(sc.state, "cube", {x, 0.0, sc.task.param("destination.z_center_hinge")});
    c.expect(advance(sc) == 300.0, "cabinet 3");
    set_point(sc.state, "cube", {x, 0.0, sc.task.param("destination.z_center_pull")});
    c.expect(advance(sc) == 1400.0, "cabinet 4 + 1000");
    c.expect(advance(sc) == 0.0, "cabinet paid twice");
    c.expect(sc.episode.sparse_accumulated == 2000.0, "cabinet total");
    c.expect(status(sc).reason == TerminationReason::kSuccess, "cabinet success");
  }
  for (const char* name : {"bookshelf_simple", "bookshelf_hard"}) {
    Scene sc = make_scene(name, 3);
    const auto objects = bookshelf_objects(sc.task);
    const auto dests = bookshelf_destinations(sc.task);
    const int n = static_cast<int>(sc.task.param("num_subtasks"));
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      const std::string& obj = objects[sc.episode.subtask_objects[k]];
      set_point(sc.state, obj, sc.state.point(dests[sc.episode.subtask_destinations[k]]));
      const double b = advance(sc);
      c.expect(b == 100.0 * (k + 1), std::string(name) + fmt(" subtask %d", k + 1));
      c.expect(advance(sc) == 0.0, std::string(name) + " paid twice");
      total += b;
    }
    c.expect(total == 1500.0, std::string(name) + " total");
    c.expect(status(sc).reason == TerminationReason::kSuccess, std::string(name) + " success");
  }
  {
    Scene sc = make_scene("maze");
    const std::vector<double>& cps = sc.task.params.vec("checkpoints");
    for (int k = 0; k < static_cast<int>(cps.size() / 3); ++k) {
      set_point(sc.state, "pelvis", {cps[3 * k], cps[3 * k + 1], cps[3 * k + 2]});
      c.expect(advance(sc) == 100.0 * (k + 1), fmt("maze checkpoint %d", k + 1));
      c.expect(advance(sc) == 0.0, "maze paid twice");
    }
  }
}

// Scripted trajectories: random aux and object motion; every bonus is paid
// once and in order.
void check_scripted_rollouts(Checks& c) {
  for (const char* name : {"cabinet", "bookshelf_simple", "bookshelf_hard", "maze"}) {
    const TaskSpec& task = find_task(name);
    for (int ep = 0; ep < 50; ++ep) {
      auto backend = std::make_unique<ScriptedBackend>(task);
      Rng script_rng(1000 + ep);
      std::vector<std::string> objects;
      std::vector<std::string> dests;
      if (task.id == TaskId::kBookshelfSimple || task.id == TaskId::kBookshelfHard) {
        objects = bookshelf_objects(task);
        dests = bookshelf_destinations(task);
      }
      backend->set_script([&](WorldState& s) {
        const double u = script_rng.uniform();
        if (task.id == TaskId::kCabinet) {
          if (u < 0.05) set_aux(s, "cabinet_slide", 0.4);
          else if (u < 0.1) set_aux(s, "drawer", 0.45);
        } else if (task.id == TaskId::kMaze) {
          if (u < 0.05) {
            const std::vector<double>& cps = task.params.vec("checkpoints");
            const int k = static_cast<int>(script_rng.below(cps.size() / 3));
            set_point(s, "pelvis", {cps[3 * k], cps[3 * k + 1], cps[3 * k + 2]});
          }
        } else if (u < 0.1) {
          const int k = static_cast<int>(script_rng.below(objects.size()));
          const int d = static_cast<int>(script_rng.below(dests.size()));
          set_point(s, objects[k], s.point(dests[d]));
        }
      });
      Environment env(task, {}, std::move(backend));
      env.reset(ep);
      std::vector<double> paid;
      const std::vector<double> zero(61, 0.0);
      int last_stage = env.episode().stage;
      for (int t = 0; t < task.episode_cap; ++t) {
        const StepResult r = env.step(zero);
        if (r.reward.sparse > 0.0) paid.push_back(r.reward.sparse);
        c.expect(env.episode().stage >= last_stage, std::string(name) + " stage regressed");
        last_stage = env.episode().stage;
        if (r.termination.terminated) break;
      }
      // Bonuses of a step may combine consecutive subtasks; split them back.
      double expected_next = 100.0;
      for (double b : paid) {
        double rest = b;
        while (rest >= expected_next - 1e-9) {
          rest -= expected_next;
          expected_next += 100.0;
          if (task.id == TaskId::kCabinet && expected_next == 500.0 && rest >= 1000.0 - 1e-9) {
            rest -= 1000.0;
          }
        }
        c.expect(std::abs(rest) < 1e-9, std::string(name) + fmt(" unexpected bonus %.1f", b));
      }
    }
  }
}

Outcome termination_staging() {
  Checks c;
  check_caps_and_thresholds(c);
  check_bonus_schedules(c);
  check_scripted_rollouts(c);
  return c.outcome(fmt("caps, %zu thresholds, push/package success, cabinet/bookshelf/maze "
                       "schedules, 200 scripted episodes",
                       std::size(kThresholds)));
}

// --- dimensions ------------------------------------------------------------

Outcome dimensional_contracts() {
  Checks c;
  const TaskSpec& walk = find_task("walk");
  const RobotModel full = h1_hand_model();
  const int base = observation_layout(walk, RobotVariant::kFull).total_dim;
  const int body = (full.body_nq - 2) + full.body_nv;
  const int hand = full.hand_nq + full.hand_nv;
  const int no_hands = observation_layout(walk, RobotVariant::kNoHands).total_dim;
  const int reach = observation_layout(find_task("reach"), RobotVariant::kFull).total_dim;
  const int act_full = make_action_map(full, RobotVariant::kFull).dim;
  const int act_no_hands = make_action_map(h1_model(), RobotVariant::kNoHands).dim;
  c.expect(base == 151, fmt("base %d", base));
  c.expect(body == 49 && hand == 51 && body + 2 * hand == base, "49 + 2 x 51");
  c.expect(no_hands == 49, fmt("no-hands %d", no_hands));
  c.expect(act_full == 61, fmt("action %d", act_full));
  c.expect(act_no_hands == 19, fmt("no-hands action %d", act_no_hands));
  c.expect(reach == 157, fmt("reach %d", reach));
  // Assembled vectors match the layouts.
  for (const char* name : {"walk", "reach"}) {
    Environment env(find_task(name));
    c.expect(static_cast<int>(env.reset(0).size()) == env.observation_dim(), name);
  }
  EnvOptions nh;
  nh.robot = RobotVariant::kNoHands;
  Environment env(walk, nh);
  c.expect(env.reset(0).size() == 49 && env.action_dim() == 19, "no-hands env");
  return c.outcome(fmt("obs %d = %d + 2 x %d, no-hands %d, reach %d, action %d / %d", base,
                       body, hand, no_hands, reach, act_full, act_no_hands));
}

// --- determinism -----------------------------------------------------------

struct Trajectory {
  std::vector<double> rewards;
  std::vector<double> observations;
  WorldState final_state;
};

Trajectory seeded_episode(const char* name, std::uint64_t seed) {
  Environment env(find_task(name));
  Trajectory tr;
  std::vector<double> obs = env.reset(seed);
  Rng rng(seed * 7 + 1);
  std::vector<double> a(env.action_dim());
  for (int t = 0; t < 500; ++t) {
    for (double& x : a) x = rng.uniform(-1.0, 1.0);
    StepResult r = env.step(a);
    tr.rewards.push_back(r.reward.total);
    tr.observations.insert(tr.observations.end(), r.observation.begin(), r.observation.end());
    if (r.termination.terminated) env.reset(seed + t + 1);
  }
  tr.final_state = env.state();
  return tr;
}

bool same(const Trajectory& a, Trajectory b) {
  b.final_state.layout = a.final_state.layout;
  return a.rewards == b.rewards && a.observations == b.observations &&
         bit_identical(a.final_state, b.final_state);
}

std::vector<std::uint8_t> step_frame(std::uint32_t n, std::span<const float> actions) {
  wire::Writer w;
  for (float a : actions) w.f32(a);
  return wire::encode_frame(wire::MsgType::kStep, n, w.data());
}

Outcome determinism() {
  Checks c;
  for (const char* name : {"walk", "cabinet", "basketball"}) {
    const Trajectory ref = seeded_episode(name, 42);
    for (int run = 1; run < 10; ++run) {
      c.expect(same(ref, seeded_episode(name, 42)), std::string(name) + fmt(" run %d", run));
    }
  }

  // Server, over TCP, against direct library stepping.
  const TaskSpec& task = find_task("walk");
  TcpServer server([&] { return std::make_unique<Session>(task, EnvOptions{}, SessionOptions{}); },
                   {.port = 0, .max_connections = 1, .log = false});
  std::thread serving([&] { server.serve(); });
  {
    EnvClient client("127.0.0.1", server.port());
    client.hello();
    const wire::StepResultMessage first = client.reset(42);
    Environment env(task);
    std::vector<double> obs = env.reset(42);
    bool ok = true;
    for (int k = 0; k < 151; ++k) ok = ok && first.observations[k] == static_cast<float>(obs[k]);
    Rng rng(9);
    std::vector<float> af(61);
    std::vector<double> ad(61);
    std::uint64_t seed = 42;
    for (int t = 0; t < 500 && ok; ++t) {
      for (int i = 0; i < 61; ++i) {
        af[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
        ad[i] = af[i];
      }
      const wire::StepResultMessage m = client.step(af);
      const StepResult r = env.step(ad);
      ok = ok && m.rewards[0] == r.reward.total && m.dense[0] == r.reward.dense &&
           m.sparse[0] == r.reward.sparse &&
           m.reasons[0] == static_cast<std::uint8_t>(r.termination.reason);
      const std::vector<float>& o =
          r.termination.terminated ? m.terminal_observations : m.observations;
      for (int k = 0; k < 151; ++k) ok = ok && o[k] == static_cast<float>(r.observation[k]);
      if (r.termination.terminated) {
        seed += 1;
        obs = env.reset(seed);
        for (int k = 0; k < 151; ++k) ok = ok && m.observations[k] == static_cast<float>(obs[k]);
      }
    }
    c.expect(ok, "server vs direct");
  }
  serving.join();
  return c.outcome("500-step seeded episodes on walk/cabinet/basketball identical over 10 runs; "
                   "TCP server equals direct stepping");
}

// --- throughput ------------------------------------------------------------

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(q * (v.size() - 1))];
}

struct Latency {
  double direct = 0.0;
  double in_process = 0.0;
  double tcp = 0.0;
};

Latency measure_latency(int steps) {
  const TaskSpec& task = find_task("walk");
  Rng rng(3);
  std::vector<float> log(static_cast<std::size_t>(steps) * 61);
  for (float& a : log) a = static_cast<float>(rng.uniform(-1.0, 1.0));
  Latency out;
  std::vector<double> samples(steps);

  // Direct: the library step plus the same f32 to f64 action copy.
  {
    Environment env(task);
    env.reset(0);
    std::vector<double> a(61);
    std::uint64_t seed = 0;
    for (int t = 0; t < steps; ++t) {
      const auto t0 = Clock::now();
      for (int i = 0; i < 61; ++i) a[i] = log[t * 61 + i];
      if (env.step(a).termination.terminated) env.reset(++seed);
      samples[t] = seconds_since(t0);
    }
    out.direct = percentile(samples, 0.5);
  }
  // In-process session: framing and encode/decode without a socket.
  {
    Session s(task, {}, {});
    wire::Writer w;
    w.u64(0);
    const auto reset = wire::encode_frame(wire::MsgType::kReset, 1, w.data());
    wire::Header h;
    h.type = wire::MsgType::kReset;
    h.env_count = 1;
    s.handle(h, std::span(reset).subspan(wire::kHeaderSize));
    h.type = wire::MsgType::kStep;
    for (int t = 0; t < steps; ++t) {
      const auto t0 = Clock::now();
      const auto frame = step_frame(1, std::span(log).subspan(t * 61, 61));
      const auto reply = s.handle(h, std::span(frame).subspan(wire::kHeaderSize));
      const auto m = wire::decode_step_result(
          1, 151, std::span(reply.bytes).subspan(wire::kHeaderSize));
      samples[t] = seconds_since(t0);
      if (m.rewards.size() != 1) std::abort();
    }
    out.in_process = percentile(samples, 0.5);
  }
  // TCP loopback.
  {
    TcpServer server([&] { return std::make_unique<Session>(task, EnvOptions{}, SessionOptions{}); },
                     {.port = 0, .max_connections = 1, .log = false});
    std::thread serving([&] { server.serve(); });
    {
      EnvClient client("127.0.0.1", server.port());
      client.hello();
      client.reset(0);
      for (int t = 0; t < steps; ++t) {
        const auto t0 = Clock::now();
        client.step(std::span(log).subspan(t * 61, 61));
        samples[t] = seconds_since(t0);
      }
    }
    serving.join();
    out.tcp = percentile(samples, 0.5);
  }
  return out;
}

Outcome server_overhead() {
  const Latency l = measure_latency(10000);
  const double tcp = l.tcp / l.direct - 1.0;
  const double local = l.in_process / l.direct - 1.0;
  const std::string detail =
      fmt("p50 over 10000 steps: direct %.2f us, in-process session %.2f us (+%.0f%%), TCP "
          "loopback %.2f us (+%.0f%%); limit +20%%",
          1e6 * l.direct, 1e6 * l.in_process, 100 * local, 1e6 * l.tcp, 100 * tcp);
  return {tcp <= 0.2 ? Status::kPass : Status::kFail, detail};
}

// --- hierarchy -------------------------------------------------------------

Outcome hierarchy() {
  Checks c;
  const ClipBox box = task_clip_box(find_task("push"));
  Rng rng(8);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec3 p{rng.uniform(-4, 4), rng.uniform(-4, 4), rng.uniform(-4, 4)};
    const Vec3 q = clip(p, box);
    const Vec3 r = clip(q, box);
    bad += !(q.x == r.x && q.y == r.y && q.z == r.z);
    bad += !(q.x >= box.lower.x && q.x <= box.upper.x && q.y >= box.lower.y &&
             q.y <= box.upper.y && q.z >= box.lower.z && q.z <= box.upper.z);
  }
  c.expect(bad == 0, fmt("%d clip violations", bad));

  MlpPolicy::Manifest m;
  m.observation_dim = 151;
  m.num_targets = 1;
  m.layers = {154, 64, 61};
  std::vector<float> params(MlpPolicy::parameter_count(m.layers));
  for (float& p : params) p = static_cast<float>(rng.uniform(-0.2, 0.2));
  auto low = std::make_shared<MlpPolicy>(m, params);
  const std::uint64_t hash = low->parameter_hash();
  ComposedPolicy composed(low, box, HandMode::kOneHand);
  Environment env(find_task("push"));
  std::vector<double> obs = env.reset(0);
  std::vector<double> robot(151);
  for (int t = 0; t < 1000; ++t) {
    std::copy_n(obs.begin(), 151, robot.begin());
    const std::vector<double> sp = {rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 3)};
    StepResult r = env.step(composed.act(robot, sp));
    obs = r.termination.terminated ? env.reset(t + 1) : std::move(r.observation);
  }
  c.expect(low->parameter_hash() == hash && low->parameters() == params, "hash changed");

  int calls = 0;
  bool both = true;
  auto two = std::make_shared<FunctionPolicy>(
      [&](std::span<const double>, std::span<const Vec3> t, std::span<double> a) {
        ++calls;
        both = both && t.size() == 2;
        std::fill(a.begin(), a.end(), 0.0);
      },
      -1, 2, 61);
  const ClipBox pbox = task_clip_box(find_task("package"));
  ComposedPolicy tc(two, pbox, task_hand_mode(find_task("package")));
  tc.act(robot, std::vector<double>{0.3, 0.2, 1.0, 0.3, -0.2, 1.0});
  c.expect(calls == 1 && both && tc.active().targets.size() == 2, "two-hand plumbing");
  const std::vector<double> hold(61, 0.25);
  ComposedPolicy hc(std::make_shared<HoldPosePolicy>(hold, 1), box, HandMode::kOneHand);
  c.expect(hc.act(robot, std::vector<double>{9, 9, 9}) == hold, "hold pose");
  return c.outcome(fmt("10000 clip points, hash %016llx stable over 1000 steps, two-hand "
                       "targets delivered",
                       static_cast<unsigned long long>(hash)));
}

// --- engine-backed criteria ------------------------------------------------

#ifdef HB_WITH_MUJOCO
EnvOptions engine_options() {
  EnvOptions o;
  o.backend = "mujoco";
  if (const char* dir = std::getenv("HBENCH_SCENE_DIR")) o.scene_dir = dir;
  return o;
}

Outcome random_zero_sanity() {
  const auto start = Clock::now();
  Checks c;
  RolloutConfig cfg;
  cfg.env = engine_options();
  cfg.episodes = 100;
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  cfg.task = "kitchen";
  double kitchen_max = 0.0;
  for (const char* policy : {"zeros", "random"}) {
    cfg.policy = policy;
    const RolloutSummary s = run_rollouts(cfg);
    for (double r : s.returns) kitchen_max = std::max(kitchen_max, std::abs(r));
  }
  c.expect(kitchen_max == 0.0, fmt("kitchen |return| %.3g", kitchen_max));
  cfg.task = "walk";
  cfg.policy = "random";
  const RolloutSummary walk = run_rollouts(cfg);
  c.expect(walk.mean_return < 100.0, fmt("walk random mean %.1f", walk.mean_return));

  // Posture and effort terms over engine rollouts.
  double lo = 1.0, hi = 0.0;
  for (const char* name : {"walk", "stand", "run"}) {
    Environment env(find_task(name), engine_options());
    Rng rng(5);
    std::vector<double> a(env.action_dim());
    env.reset(0);
    for (int t = 0; t < 2000; ++t) {
      for (double& x : a) x = rng.uniform(-1.0, 1.0);
      const StepResult r = env.step(a);
      for (const char* term : {"effort", "stand", "upright", "height", "still"}) {
        auto it = r.reward.terms.find(term);
        if (it == r.reward.terms.end()) continue;
        const double min = std::string(term) == "effort" ? 0.8 : 0.0;
        c.expect(it->second >= min && it->second <= 1.0, std::string(term) + " out of range");
        lo = std::min(lo, it->second);
        hi = std::max(hi, it->second);
      }
      if (r.termination.terminated) env.reset(t + 1);
    }
  }
  const double t = seconds_since(start);
  c.expect(t <= 900.0, fmt("runtime %.0f s", t));
  return c.outcome(fmt("kitchen max |return| %.3g, walk random mean %.1f, posture/effort in "
                       "[%.3f, %.3f], %.0f s",
                       kitchen_max, walk.mean_return, lo, hi, t));
}

Outcome fps_ordering() {
  const CollisionProfile profiles[] = {CollisionProfile::kFeetOnly,
                                       CollisionProfile::kSimplifiedBody,
                                       CollisionProfile::kNoHands, CollisionProfile::kFull};
  const FpsReport r = bench_fps("walk", engine_options(), profiles, 20000, 0);
  std::string d;
  for (const FpsResult& f : r.results) d += fmt("%s %.0f/s ", f.profile.c_str(), f.fps);
  return {r.ordering_checked && r.ordering_holds ? Status::kPass : Status::kFail,
          d + "(ordering feet_only > simplified_body > no_hands > full)"};
}
#endif

void print(const char* name, const Outcome& o) {
  const char* s = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
  std::printf("%s  %-30s %s\n", s, name, o.detail.c_str());
  std::fflush(stdout);
}

}  // namespace
}  // namespace hbench

int main(int argc, char** argv) {
  using namespace hbench;
  const bool engine_only = argc > 1 && std::string(argv[1]) == "--engine-only";
  std::vector<Outcome> outcomes;
  auto run = [&](const char* name, Outcome (*fn)()) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {Status::kFail, std::string("threw: ") + e.what()};
    }
    print(name, o);
    outcomes.push_back(o);
  };

  if (engine_only) {
#ifdef HB_WITH_MUJOCO
    run("random/zero-policy sanity", random_zero_sanity);
    run("throughput: fps ordering", fps_ordering);
#else
    print("random/zero-policy sanity",
          {Status::kSkip, "needs the engine backend; configure with -DHB_WITH_MUJOCO=ON"});
    print("throughput: fps ordering",
          {Status::kSkip, "needs the engine backend; configure with -DHB_WITH_MUJOCO=ON"});
    return 77;
#endif
  } else {
    run("tolerance suite", tolerance_suite);
    run("oracle equivalence", oracle_equivalence);
    run("termination/staging", termination_staging);
    run("dimensional contracts", dimensional_contracts);
    run("determinism", determinism);
    run("throughput: server overhead", server_overhead);
    run("hierarchy", hierarchy);
  }
  int failed = 0;
  for (const Outcome& o : outcomes) failed += o.status == Status::kFail;
  return failed == 0 ? 0 : 1;
}
