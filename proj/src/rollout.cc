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


#include "hbench/rollout.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include "hbench/error.h"
#include "hbench/fuzz.h"
#include "hbench/hierarchy.h"
#include "hbench/reward.h"
#include "hbench/scripted_backend.h"
#include "json.hpp"
#include "oracle/oracle.h"

namespace hbench {

namespace {

using Json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class ZerosPolicy : public RolloutPolicy {
 public:
  void act(std::span<const double>, std::span<double> action) override {
    std::fill(action.begin(), action.end(), 0.0);
  }
};

class RandomPolicy : public RolloutPolicy {
 public:
  void reset(std::uint64_t seed) override { rng_ = Rng(seed ^ 0x9e3779b97f4a7c15ull); }
  void act(std::span<const double>, std::span<double> action) override {
    for (double& a : action) a = rng_.uniform(-1.0, 1.0);
  }

 private:
  Rng rng_;
};

class SinePolicy : public RolloutPolicy {
 public:
  void reset(std::uint64_t) override { t_ = 0; }
  void act(std::span<const double>, std::span<double> action) override {
    for (std::size_t i = 0; i < action.size(); ++i) {
      action[i] = 0.5 * std::sin(2.0 * std::numbers::pi * 0.5 * 0.02 * t_ + i);
    }
    ++t_;
  }

 private:
  std::int64_t t_ = 0;
};

class HierarchicalRolloutPolicy : public RolloutPolicy {
 public:
  HierarchicalRolloutPolicy(const Environment& env, const std::string& low_path,
                            const std::string& high_path)
      : box_(task_clip_box(env.task())) {
    auto low = std::make_shared<MlpPolicy>(MlpPolicy::load(low_path));
    composed_ = std::make_unique<ComposedPolicy>(low, box_, task_hand_mode(env.task()));
    if (!high_path.empty()) high_ = std::make_unique<MlpSetpointPolicy>(MlpPolicy::load(high_path));
  }
  void reset(std::uint64_t) override { composed_->reset(); }
  void act(std::span<const double> observation, std::span<double> action) override {
    SetpointCommand c;
    if (high_) {
      c = high_->act(observation);
    } else {
      const Vec3 center = 0.5 * (box_.lower + box_.upper);
      c.targets.assign(composed_->setpoint_dim() / 3, center);
    }
    const std::vector<double> a = composed_->act(observation, c);
    if (a.size() != action.size()) {
      throw Error("low-level policy emits " + std::to_string(a.size()) +
                  " actions; environment expects " + std::to_string(action.size()));
    }
    std::copy(a.begin(), a.end(), action.begin());
  }

 private:
  ClipBox box_;
  std::unique_ptr<ComposedPolicy> composed_;
  std::unique_ptr<MlpSetpointPolicy> high_;
};

struct EpisodeOutcome {
  double ret = 0.0;
  std::int64_t length = 0;
  TerminationReason reason = TerminationReason::kNone;
  int subtasks = 0;
  std::int64_t clamped = 0;
  std::string trace;  // JSON lines
};

int subtask_count(const Environment& env) {
  const EpisodeState& ep = env.episode();
  if (env.task().id == TaskId::kMaze) return ep.checkpoint_index;
  return static_cast<int>(ep.completed_subtasks.size());
}

EpisodeOutcome run_episode(const RolloutConfig& cfg, const TaskSpec& task, int index,
                           bool trace) {
  Environment env(task, cfg.env);
  std::unique_ptr<RolloutPolicy> policy = make_policy(cfg.policy, env);
  const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(index);
  std::vector<double> obs = env.reset(seed);
  policy->reset(seed);
  std::vector<double> action(env.action_dim());
  EpisodeOutcome out;
  std::string lines;
  while (true) {
    policy->act(obs, action);
    StepResult r = env.step(action);
    out.ret += r.reward.total;
    out.clamped += r.clamped;
    ++out.length;
    if (trace) {
      Json j;
      j["type"] = "step";
      j["episode"] = index;
      j["step"] = out.length;
      j["reward"] = r.reward.total;
      j["dense"] = r.reward.dense;
      j["sparse"] = r.reward.sparse;
      j["terms"] = r.reward.terms;
      j["done"] = r.termination.terminated;
      j["reason"] = std::string(to_string(r.termination.reason));
      lines += j.dump();
      lines += '\n';
    }
    obs = std::move(r.observation);
    if (r.termination.terminated) {
      out.reason = r.termination.reason;
      break;
    }
  }
  out.subtasks = subtask_count(env);
  if (trace) {
    Json j;
    j["type"] = "episode";
    j["episode"] = index;
    j["seed"] = seed;
    j["return"] = out.ret;
    j["length"] = out.length;
    j["reason"] = std::string(to_string(out.reason));
    j["subtasks"] = out.subtasks;
    lines += j.dump();
    lines += '\n';
  }
  out.trace = std::move(lines);
  return out;
}

}  // namespace

std::vector<std::string> policy_names() {
  return {"zeros", "random", "scripted:hold", "scripted:sine",
          "hierarchical:<low.mlp>[:<high.mlp>]"};
}

std::unique_ptr<RolloutPolicy> make_policy(const std::string& spec, const Environment& env) {
  if (spec == "zeros" || spec == "scripted:hold") return std::make_unique<ZerosPolicy>();
  if (spec == "random") return std::make_unique<RandomPolicy>();
  if (spec == "scripted:sine") return std::make_unique<SinePolicy>();
  const std::string prefix = "hierarchical:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
    const std::string files = spec.substr(prefix.size());
    const std::size_t colon = files.find(':');
    const std::string low = files.substr(0, colon);
    const std::string high = colon == std::string::npos ? "" : files.substr(colon + 1);
    return std::make_unique<HierarchicalRolloutPolicy>(env, low, high);
  }
  std::string valid;
  for (const std::string& n : policy_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw Error("unknown policy '" + spec + "'; valid: " + valid);
}

std::string rollout_config_json(const RolloutConfig& cfg) {
  Json j;
  j["task"] = cfg.task;
  j["policy"] = cfg.policy;
  j["episodes"] = cfg.episodes;
  j["seed"] = cfg.seed;
  j["backend"] = cfg.env.backend;
  j["robot"] = std::string(to_string(cfg.env.robot));
  j["collision_profile"] = std::string(to_string(cfg.env.collision_profile));
  j["control_mode"] = std::string(to_string(cfg.env.control_mode));
  j["config_dir"] = cfg.config_dir.string();
  j["threads"] = cfg.threads;
  return j.dump();
}

RolloutSummary run_rollouts(const RolloutConfig& cfg) {
  if (cfg.episodes < 1) throw Error("episodes must be at least 1");
  const TaskSpec task = resolve_task(cfg.task, cfg.config_dir);
  {
    Environment probe(task, cfg.env);
    make_policy(cfg.policy, probe);  // validates the policy name early
  }
  const bool trace = !cfg.out.empty();
  const auto start = Clock::now();
  std::vector<EpisodeOutcome> outcomes(cfg.episodes);
  const int workers = std::max(1, std::min(cfg.threads, cfg.episodes));
  std::vector<std::exception_ptr> failures(workers);
  auto work = [&](int w) {
    try {
      for (int e = w; e < cfg.episodes; e += workers) outcomes[e] = run_episode(cfg, task, e, trace);
    } catch (...) {
      failures[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (std::thread& t : threads) t.join();
  }
  for (const std::exception_ptr& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  RolloutSummary s;
  s.task = task.name;
  s.policy = cfg.policy;
  s.episodes = cfg.episodes;
  s.success_target = task.success_target;
  for (const EpisodeOutcome& o : outcomes) {
    s.returns.push_back(o.ret);
    s.lengths.push_back(o.length);
    ++s.termination_reasons[std::string(to_string(o.reason))];
    ++s.subtask_histogram[o.subtasks];
    s.clamped_actions += o.clamped;
  }
  double sum = 0.0;
  for (double r : s.returns) sum += r;
  s.mean_return = sum / s.episodes;
  double var = 0.0;
  for (double r : s.returns) var += (r - s.mean_return) * (r - s.mean_return);
  s.std_return = std::sqrt(var / s.episodes);
  s.seconds = seconds_since(start);

  if (trace) {
    std::filesystem::create_directories(cfg.out);
    std::ofstream t(cfg.out / "trace.jsonl");
    if (!t) throw Error("cannot write " + (cfg.out / "trace.jsonl").string());
    Json header;
    header["type"] = "config";
    header["config"] = Json::parse(rollout_config_json(cfg));
    header["task_config"] = Json::parse(task_config_json(task));
    t << header.dump() << '\n';
    for (const EpisodeOutcome& o : outcomes) t << o.trace;
    std::ofstream sj(cfg.out / "summary.json");
    sj << summary_json(s) << '\n';
  }
  return s;
}

std::string summary_json(const RolloutSummary& s) {
  Json j;
  j["task"] = s.task;
  j["policy"] = s.policy;
  j["episodes"] = s.episodes;
  j["success_target"] = s.success_target;
  j["return_mean"] = s.mean_return;
  j["return_std"] = s.std_return;
  j["returns"] = s.returns;
  j["lengths"] = s.lengths;
  j["termination_reasons"] = s.termination_reasons;
  Json hist = Json::object();
  for (const auto& [k, v] : s.subtask_histogram) hist[std::to_string(k)] = v;
  j["subtask_histogram"] = hist;
  j["clamped_actions"] = s.clamped_actions;
  return j.dump();
}

std::string summary_table(const RolloutSummary& s) {
  std::ostringstream o;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "task %s  policy %s  episodes %d\n", s.task.c_str(),
                s.policy.c_str(), s.episodes);
  o << buf;
  std::snprintf(buf, sizeof(buf), "return  %.3f +- %.3f  (success target %.1f)\n",
                s.mean_return, s.std_return, s.success_target);
  o << buf;
  o << "termination\n";
  for (const auto& [reason, n] : s.termination_reasons) {
    std::snprintf(buf, sizeof(buf), "  %-18s %d\n", reason.c_str(), n);
    o << buf;
  }
  o << "completed subtasks\n";
  for (const auto& [k, n] : s.subtask_histogram) {
    std::snprintf(buf, sizeof(buf), "  %-18d %d\n", k, n);
    o << buf;
  }
  std::snprintf(buf, sizeof(buf), "clamped action entries %lld, %.2f s\n",
                static_cast<long long>(s.clamped_actions), s.seconds);
  o << buf;
  return o.str();
}

FpsReport bench_fps(const std::string& task_name, const EnvOptions& env,
                    std::span<const CollisionProfile> profiles, std::int64_t steps,
                    std::uint64_t seed) {
  const TaskSpec& task = find_task(task_name);
  FpsReport report;
  for (CollisionProfile profile : profiles) {
    EnvOptions opts = env;
    opts.collision_profile = profile;
    if (profile == CollisionProfile::kNoHands) opts.robot = RobotVariant::kNoHands;
    Environment e(task, opts);
    Rng rng(seed);
    std::vector<double> action(e.action_dim());
    e.reset(seed);
    const auto start = Clock::now();
    for (std::int64_t i = 0; i < steps; ++i) {
      for (double& a : action) a = rng.uniform(-1.0, 1.0);
      if (e.step(action).termination.terminated) e.reset(seed + static_cast<std::uint64_t>(i));
    }
    FpsResult r;
    r.profile = std::string(to_string(profile));
    r.steps = steps;
    r.seconds = seconds_since(start);
    r.fps = static_cast<double>(steps) / r.seconds;
    r.synthetic = e.backend().capabilities().synthetic;
    report.results.push_back(r);
  }
  bool synthetic = false;
  for (const FpsResult& r : report.results) synthetic = synthetic || r.synthetic;
  if (!synthetic && report.results.size() == 4) {
    std::map<std::string, double> fps;
    for (const FpsResult& r : report.results) fps[r.profile] = r.fps;
    report.ordering_checked = true;
    report.ordering_holds = fps["feet_only"] > fps["simplified_body"] &&
                            fps["simplified_body"] > fps["no_hands"] &&
                            fps["no_hands"] > fps["full"];
  }
  return report;
}

std::string fps_report_text(const FpsReport& report) {
  std::ostringstream o;
  char buf[256];
  for (const FpsResult& r : report.results) {
    std::snprintf(buf, sizeof(buf), "%-16s %10.0f steps/s  (%lld steps, %.2f s)%s\n",
                  r.profile.c_str(), r.fps, static_cast<long long>(r.steps), r.seconds,
                  r.synthetic ? "  synthetic" : "");
    o << buf;
  }
  if (report.ordering_checked) {
    o << "profile ordering feet_only > simplified_body > no_hands > full: "
      << (report.ordering_holds ? "holds" : "violated") << '\n';
  } else {
    o << "profile ordering not checked: synthetic backend\n";
  }
  return o.str();
}

double OracleDiffReport::max_error() const {
  double m = std::max(max_dense, max_sparse);
  for (const auto& [name, v] : max_term) m = std::max(m, v);
  return m;
}

OracleDiffReport oracle_diff(const TaskSpec& task, int states, std::uint64_t seed) {
  const auto start = Clock::now();
  auto layout = make_task_scene(task, RobotVariant::kFull, CollisionProfile::kFull);
  const int action_dim = layout->robot().nu();
  Rng rng(seed);
  OracleDiffReport rep;
  rep.task = task.name;
  rep.states = states;
  for (int i = 0; i < states; ++i) {
    const WorldState s = fuzz_world_state(layout, rng);
    const EpisodeState ep = fuzz_episode(task, rng);
    const std::vector<double> u = fuzz_action(action_dim, rng);
    const RewardBreakdown k = compute_reward(task, s, u, ep);
    const oracle::Reward o = oracle::reward(task, s, u, ep);
    rep.max_dense = std::max(rep.max_dense, std::abs(k.dense - o.dense));
    rep.max_sparse = std::max(rep.max_sparse, std::abs(k.sparse - o.sparse));
    for (const auto& [name, value] : o.terms) {
      auto it = k.terms.find(name);
      if (it == k.terms.end()) continue;
      double& m = rep.max_term[name];
      m = std::max(m, std::abs(it->second - value));
    }
    if (!(check_termination(task, s, ep) == oracle::termination(task, s, ep))) {
      ++rep.termination_mismatches;
    }
  }
  rep.seconds = seconds_since(start);
  return rep;
}

std::string oracle_diff_text(const std::vector<OracleDiffReport>& reports) {
  std::ostringstream o;
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%-18s %8s %12s %12s %12s %6s\n", "task", "states",
                "max|dense|", "max|sparse|", "max|term|", "term!=");
  o << buf;
  for (const OracleDiffReport& r : reports) {
    double term = 0.0;
    for (const auto& [name, v] : r.max_term) term = std::max(term, v);
    std::snprintf(buf, sizeof(buf), "%-18s %8d %12.3e %12.3e %12.3e %6d\n", r.task.c_str(),
                  r.states, r.max_dense, r.max_sparse, term, r.termination_mismatches);
    o << buf;
  }
  return o.str();
}

}  // namespace hbench
