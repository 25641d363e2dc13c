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
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <thread>
#include <vector>

#include "doctest.h"
#include "hbench/env_pool.h"
#include "hbench/environment.h"
#include "hbench/error.h"
#include "hbench/protocol.h"
#include "hbench/rng.h"
#include "hbench/scripted_backend.h"
#include "hbench/server.h"
#include "json.hpp"
#include "test_util.h"

namespace hbench {
namespace {

using wire::MsgType;

// Sends one encoded frame through a session and returns the reply bytes.
Session::Reply send(Session& s, const std::vector<std::uint8_t>& frame) {
  std::array<std::uint8_t, wire::kHeaderSize> head{};
  std::copy_n(frame.begin(), wire::kHeaderSize, head.begin());
  const wire::HeaderParse p = wire::parse_header(head);
  const std::span<const std::uint8_t> payload(frame.data() + wire::kHeaderSize,
                                              frame.size() - wire::kHeaderSize);
  return p.ok ? s.handle(p.header, payload) : s.reject(p.error);
}

wire::Frame as_frame(const std::vector<std::uint8_t>& bytes) {
  std::array<std::uint8_t, wire::kHeaderSize> head{};
  std::copy_n(bytes.begin(), wire::kHeaderSize, head.begin());
  const wire::HeaderParse p = wire::parse_header(head);
  REQUIRE(p.ok);
  return {p.header, {bytes.begin() + wire::kHeaderSize, bytes.end()}};
}

std::vector<std::uint8_t> reset_frame(std::uint32_t n, std::uint64_t seed) {
  wire::Writer w;
  w.u64(seed);
  return wire::encode_frame(MsgType::kReset, n, w.data());
}

std::vector<std::uint8_t> step_frame(std::uint32_t n, std::span<const float> actions) {
  wire::Writer w;
  for (float a : actions) w.f32(a);
  return wire::encode_frame(MsgType::kStep, n, w.data());
}

// Deterministic action log in [-1, 1].
std::vector<float> action_log(int steps, int width, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> out(static_cast<std::size_t>(steps) * width);
  for (float& a : out) a = static_cast<float>(rng.uniform(-1.0, 1.0));
  return out;
}

// Drops the pelvis once the backend reaches `at_step`, so the episode
// ends on the height rule.
BackendFactory falling_factory(int at_step) {
  return [at_step](const TaskSpec& task, int) {
    auto b = std::make_unique<ScriptedBackend>(task);
    b->set_script([at_step](WorldState& s) {
      if (s.step_index == at_step) {
        Vec3 p = s.point("pelvis");
        p.z = 0.05;
        testing::set_point(s, "pelvis", p);
        Vec3 h = s.point("head");
        h.z = 0.3;
        testing::set_point(s, "head", h);
      }
    });
    return b;
  };
}

TEST_CASE("hello returns the task spec") {
  Session s(find_task("walk"), {}, {.num_envs = 2, .num_threads = 1, .base_seed = 9});
  const auto reply = send(s, wire::encode_frame(MsgType::kHello, 0, {}));
  CHECK_FALSE(reply.close);
  const wire::Frame f = as_frame(reply.bytes);
  REQUIRE(f.header.type == MsgType::kSpec);
  CHECK(f.header.env_count == 2);
  const wire::SpecMessage spec = wire::decode_spec(f.payload);
  CHECK(spec.obs_dim == 151);
  CHECK(spec.action_dim == 61);
  CHECK(spec.episode_cap == 1000);
  CHECK(spec.success_target == 700.0);
  CHECK(spec.base_seed == 9);
  const auto manifest = nlohmann::json::parse(spec.manifest);
  CHECK(manifest.at("obs_dim") == 151);
}

TEST_CASE("reset returns one observation block") {
  Session s(find_task("push"), {}, {.num_envs = 3});
  const wire::Frame f = as_frame(send(s, reset_frame(3, 5)).bytes);
  REQUIRE(f.header.type == MsgType::kStepResult);
  const auto m = wire::decode_step_result(3, 163, f.payload);
  for (int i = 0; i < 3; ++i) {
    Environment env(find_task("push"));
    const std::vector<double> obs = env.reset(5 + i);
    for (int k = 0; k < 163; ++k) REQUIRE(m.observations[i * 163 + k] == static_cast<float>(obs[k]));
  }
  CHECK(s.pool().episode_seed(2) == 7);
}

TEST_CASE("protocol errors") {
  Session s(find_task("walk"), {}, {.num_envs = 2});
  auto code_of = [](const Session::Reply& r) {
    const wire::Frame f = as_frame(r.bytes);
    REQUIRE(f.header.type == MsgType::kError);
    return wire::decode_error(f.payload);
  };

  SUBCASE("step before reset") {
    const auto r = send(s, step_frame(2, std::vector<float>(122, 0.f)));
    CHECK_FALSE(r.close);
    CHECK(code_of(r).first == wire::ErrorCode::kUnexpected);
  }
  SUBCASE("malformed frames keep the connection") {
    auto bad = wire::encode_frame(MsgType::kHello, 0, {});
    bad[1] = 'X';
    const auto r = send(s, bad);
    CHECK_FALSE(r.close);
    const auto [code, msg] = code_of(r);
    CHECK(code == wire::ErrorCode::kMalformed);
    CHECK(msg.find("bad magic") != std::string::npos);
    // The session still serves.
    CHECK(as_frame(send(s, reset_frame(2, 0)).bytes).header.type == MsgType::kStepResult);
  }
  SUBCASE("version mismatch closes") {
    auto f = wire::encode_frame(MsgType::kHello, 0, {});
    f[4] = 2;
    const auto r = send(s, f);
    CHECK(r.close);
    const auto [code, msg] = code_of(r);
    CHECK(code == wire::ErrorCode::kVersionMismatch);
    CHECK(msg.find("version 2") != std::string::npos);
  }
  SUBCASE("bad shapes") {
    send(s, reset_frame(2, 0));
    auto r = send(s, step_frame(2, std::vector<float>(61, 0.f)));
    CHECK_FALSE(r.close);
    CHECK(code_of(r).first == wire::ErrorCode::kBadShape);
    r = send(s, step_frame(1, std::vector<float>(122, 0.f)));
    CHECK(code_of(r).first == wire::ErrorCode::kBadShape);
    r = send(s, wire::encode_frame(MsgType::kReset, 2, std::vector<std::uint8_t>(3, 0)));
    CHECK(code_of(r).first == wire::ErrorCode::kBadShape);
    r = send(s, reset_frame(5, 0));
    CHECK(code_of(r).first == wire::ErrorCode::kBadShape);
    // A well-formed step still works afterwards.
    CHECK(as_frame(send(s, step_frame(2, std::vector<float>(122, 0.f))).bytes).header.type ==
          MsgType::kStepResult);
  }
  SUBCASE("server-only message types are unexpected") {
    const auto r = send(s, wire::encode_frame(MsgType::kStepResult, 0, {}));
    CHECK(code_of(r).first == wire::ErrorCode::kUnexpected);
  }
}

// Byte stream of a whole session driven by a fixed action log.
std::vector<std::uint8_t> transcript(const char* task, int num_envs, int num_threads,
                                     int steps) {
  Session s(find_task(task), {}, {.num_envs = num_envs, .num_threads = num_threads});
  std::vector<std::uint8_t> out;
  auto append = [&](const Session::Reply& r) { out.insert(out.end(), r.bytes.begin(), r.bytes.end()); };
  append(send(s, wire::encode_frame(MsgType::kHello, 0, {})));
  append(send(s, reset_frame(num_envs, 3)));
  const int width = num_envs * s.pool().action_dim();
  const std::vector<float> log = action_log(steps, width, 77);
  for (int t = 0; t < steps; ++t) {
    append(send(s, step_frame(num_envs, std::span(log).subspan(t * width, width))));
  }
  return out;
}

TEST_CASE("wire determinism across runs and worker counts") {
  for (const char* task : {"walk", "basketball", "cabinet"}) {
    CAPTURE(task);
    const auto a = transcript(task, 4, 1, 300);
    CHECK(a == transcript(task, 4, 1, 300));
    CHECK(a == transcript(task, 4, 2, 300));
    CHECK(a == transcript(task, 4, 4, 300));
  }
}

TEST_CASE("served steps equal direct steps bit for bit") {
  const TaskSpec& task = find_task("stand");
  Session s(task, {}, {.num_envs = 1});
  Environment env(task);
  send(s, reset_frame(1, 11));
  env.reset(11);
  const std::vector<float> log = action_log(500, 61, 5);
  std::vector<double> action(61);
  for (int t = 0; t < 500; ++t) {
    const std::span<const float> a = std::span(log).subspan(t * 61, 61);
    const wire::Frame f = as_frame(send(s, step_frame(1, a)).bytes);
    const auto m = wire::decode_step_result(1, 151, f.payload);
    for (int i = 0; i < 61; ++i) action[i] = a[i];
    StepResult r = env.step(action);
    REQUIRE(m.rewards[0] == r.reward.total);
    REQUIRE(m.dense[0] == r.reward.dense);
    REQUIRE(m.sparse[0] == r.reward.sparse);
    REQUIRE(m.reasons[0] == static_cast<std::uint8_t>(r.termination.reason));
    const std::vector<float>& obs =
        r.termination.terminated ? m.terminal_observations : m.observations;
    for (int k = 0; k < 151; ++k) REQUIRE(obs[k] == static_cast<float>(r.observation[k]));
    if (r.termination.terminated) env.reset(11 + 1);
  }
}

TEST_CASE("terminated envs auto-reset from their seed stream") {
  const TaskSpec& task = find_task("walk");
  EnvPool pool(task, {}, 3, 1, falling_factory(4));
  pool.reset(20);
  const std::vector<double> zero(3 * 61, 0.0);
  for (int t = 1; t <= 4; ++t) {
    const auto& r = pool.step(zero);
    for (int i = 0; i < 3; ++i) {
      CAPTURE(t);
      CHECK(r[i].done == (t == 4));
      if (t < 4) CHECK(r[i].terminal_observation.empty());
    }
  }
  EnvPool fresh(task, {}, 3, 1, falling_factory(4));
  fresh.reset(20);
  for (int t = 1; t <= 4; ++t) {
    const auto& rr = fresh.step(zero);
    if (t < 4) continue;
    for (int i = 0; i < 3; ++i) {
      CAPTURE(i);
      CHECK(rr[i].reason == TerminationReason::kFailureHeight);
      CHECK(rr[i].terminal_observation.size() == 151);
      // Next seed in the stream of env i.
      CHECK(fresh.episode_seed(i) == 20 + i + 3);
      Environment direct(task);
      const std::vector<double> obs = direct.reset(20 + i + 3);
      for (int k = 0; k < 151; ++k) {
        REQUIRE(fresh.observations()[i * 151 + k] == obs[k]);
      }
      CHECK(rr[i].terminal_observation != obs);
    }
  }
}

TEST_CASE("timeout flag is set at the episode cap") {
  const TaskSpec& task = find_task("push");  // cap 500
  Session s(task, {}, {.num_envs = 1});
  send(s, reset_frame(1, 0));
  const std::vector<float> zero(61, 0.f);
  wire::StepResultMessage last;
  int t = 0;
  for (; t < 600; ++t) {
    const wire::Frame f = as_frame(send(s, step_frame(1, zero)).bytes);
    last = wire::decode_step_result(1, 163, f.payload);
    if (last.flags[0] & wire::kFlagDone) break;
  }
  CHECK(t + 1 <= 500);
  if (last.reasons[0] == static_cast<std::uint8_t>(TerminationReason::kTimeout)) {
    CHECK(t + 1 == 500);
    CHECK(last.flags[0] == (wire::kFlagDone | wire::kFlagTimeout));
  } else {
    CHECK((last.flags[0] & wire::kFlagTimeout) == 0);
  }
}

TEST_CASE("a diverged env is isolated") {
  const TaskSpec& task = find_task("walk");
  BackendFactory crashing = [](const TaskSpec& t, int index) {
    auto b = std::make_unique<ScriptedBackend>(t);
    if (index == 1) {
      auto fired = std::make_shared<bool>(false);
      b->set_script([fired](WorldState& s) {
        if (s.step_index == 7 && !*fired) {
          *fired = true;
          s.joint_pos[12] = std::numeric_limits<double>::quiet_NaN();
        }
      });
    }
    return b;
  };
  Session bad(task, {}, {.num_envs = 3, .num_threads = 3}, crashing);
  Session good(task, {}, {.num_envs = 3, .num_threads = 3});
  send(bad, reset_frame(3, 1));
  send(good, reset_frame(3, 1));
  const std::vector<float> log = action_log(40, 3 * 61, 8);
  int errors = 0;
  for (int t = 0; t < 40; ++t) {
    const auto a = std::span(log).subspan(t * 183, 183);
    const auto mb = wire::decode_step_result(3, 151, as_frame(send(bad, step_frame(3, a)).bytes).payload);
    const auto mg = wire::decode_step_result(3, 151, as_frame(send(good, step_frame(3, a)).bytes).payload);
    for (int i : {0, 2}) {
      REQUIRE(mb.rewards[i] == mg.rewards[i]);
      REQUIRE(mb.flags[i] == mg.flags[i]);
      for (int k = 0; k < 151; ++k) REQUIRE(mb.observations[i * 151 + k] == mg.observations[i * 151 + k]);
    }
    if (mb.flags[1] & wire::kFlagError) {
      ++errors;
      CHECK(t == 6);
      CHECK((mb.flags[1] & wire::kFlagDone) != 0);
      REQUIRE(mb.errors.size() == 1);
      CHECK(mb.errors[0].first == 1);
      CHECK(mb.errors[0].second == "simulation diverged");
      // Env 1 restarted from the next seed in its stream.
      Environment direct(task);
      const std::vector<double> obs = direct.reset(1 + 1 + 3);
      for (int k = 0; k < 151; ++k) REQUIRE(mb.observations[151 + k] == static_cast<float>(obs[k]));
    } else {
      CHECK(mb.errors.empty());
    }
  }
  CHECK(errors == 1);
}

TEST_CASE("tcp round trip matches the in-process session") {
  const TaskSpec& task = find_task("walk");
  TcpServer server([&] { return std::make_unique<Session>(task, EnvOptions{}, SessionOptions{.num_envs = 2}); },
                   {.port = 0, .max_connections = 2, .log = false});
  std::thread serving([&] { server.serve(); });
  std::vector<std::uint8_t> first;
  for (int run = 0; run < 2; ++run) {
    EnvClient client("127.0.0.1", server.port());
    const wire::SpecMessage spec = client.hello();
    CHECK(spec.action_dim == 61);
    client.reset(4);
    const std::vector<float> log = action_log(100, 122, 2);
    for (int t = 0; t < 100; ++t) client.step(std::span(log).subspan(t * 122, 122));
    if (run == 0) first = client.transcript();
    else CHECK(client.transcript() == first);
  }
  serving.join();

  // Same byte stream as the in-process session.
  Session s(task, {}, {.num_envs = 2});
  std::vector<std::uint8_t> local;
  auto append = [&](const Session::Reply& r) { local.insert(local.end(), r.bytes.begin(), r.bytes.end()); };
  append(send(s, wire::encode_frame(MsgType::kHello, 0, {})));
  append(send(s, reset_frame(2, 4)));
  const std::vector<float> log = action_log(100, 122, 2);
  for (int t = 0; t < 100; ++t) append(send(s, step_frame(2, std::span(log).subspan(t * 122, 122))));
  CHECK(local == first);
}

TEST_CASE("tcp errors reach the client and the connection survives") {
  TcpServer server([] { return std::make_unique<Session>(find_task("stand"), EnvOptions{}, SessionOptions{}); },
                   {.port = 0, .max_connections = 1, .log = false});
  std::thread serving([&] { server.serve(); });
  {
    EnvClient client("127.0.0.1", server.port());
    auto bad = wire::encode_frame(MsgType::kHello, 0, {});
    bad[0] = 'Z';
    client.send_bytes(bad);
    const wire::Frame f = client.receive();
    CHECK(f.header.type == MsgType::kError);
    client.hello();
    client.reset(0);
    CHECK_THROWS_WITH_AS(client.step(std::vector<float>(3, 0.f)), doctest::Contains("step expects"), Error);
    CHECK(client.step(std::vector<float>(61, 0.f)).rewards.size() == 1);
  }
  serving.join();
}

}  // namespace
}  // namespace hbench
