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


#include "hbench/fuzz.h"

#include <cmath>
#include <numbers>
#include <numeric>

namespace hbench {

namespace {

Quat random_unit_quat(Rng& rng) {
  const double u1 = rng.uniform();
  const double u2 = 2.0 * std::numbers::pi * rng.uniform();
  const double u3 = 2.0 * std::numbers::pi * rng.uniform();
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  return normalized(Quat{a * std::sin(u2), a * std::cos(u2), b * std::sin(u3), b * std::cos(u3)});
}

Vec3 random_point(Rng& rng) {
  return {rng.uniform(-1.0, 4.0), rng.uniform(-1.5, 7.0), rng.uniform(0.0, 2.8)};
}

Vec3 random_velocity(Rng& rng, double s) {
  return {rng.uniform(-s, s), rng.uniform(-s, s), rng.uniform(-s, s)};
}

std::vector<int> permutation(int n, Rng& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  for (int i = n; i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  return v;
}

}  // namespace

WorldState fuzz_world_state(const std::shared_ptr<const SceneLayout>& layout, Rng& rng) {
  WorldState s = make_world_state(layout);
  s.step_index = static_cast<std::int64_t>(rng.below(1000));
  s.time = 0.02 * static_cast<double>(s.step_index);
  s.joint_pos[0] = rng.uniform(-1.0, 7.0);
  s.joint_pos[1] = rng.uniform(-1.5, 7.0);
  s.joint_pos[2] = rng.uniform(0.0, 2.8);
  const Quat q = random_unit_quat(rng);
  s.joint_pos[3] = q.w;
  s.joint_pos[4] = q.x;
  s.joint_pos[5] = q.y;
  s.joint_pos[6] = q.z;
  for (std::size_t i = 7; i < s.joint_pos.size(); ++i) s.joint_pos[i] = rng.uniform(-1.5, 1.5);
  for (double& v : s.joint_vel) v = rng.uniform(-3.0, 3.0);
  for (std::size_t b = 0; b < s.body_pos.size(); ++b) {
    s.body_pos[b] = random_point(rng);
    s.body_quat[b] = random_unit_quat(rng);
    s.body_linvel[b] = random_velocity(rng, 3.0);
  }
  for (Vec3& p : s.site_pos) p = random_point(rng);
  for (double& a : s.aux_pos) a = rng.uniform(-1.5, 1.5);
  for (double& a : s.aux_vel) a = rng.uniform(-2.0, 2.0);
  s.z_proj = rng.uniform(-1.0, 1.0);
  s.pelvis_frame_vel = {rng.uniform(-7.0, 7.0), rng.uniform(-7.0, 7.0)};
  const int n_geoms = layout->num_geoms();
  if (n_geoms >= 2) {
    const int n_contacts = static_cast<int>(rng.below(4));
    for (int k = 0; k < n_contacts; ++k) {
      const int a = static_cast<int>(rng.below(n_geoms));
      int b = static_cast<int>(rng.below(n_geoms - 1));
      if (b >= a) ++b;
      s.contacts.push_back({a, b, rng.uniform(0.0, 100.0)});
    }
  }
  return s;
}

EpisodeState fuzz_episode(const TaskSpec& task, Rng& rng) {
  EpisodeState ep;
  ep.seed = rng.next();
  ep.rng = Rng(ep.seed);
  ep.step_index = static_cast<std::int64_t>(rng.below(task.episode_cap + 1));
  ep.target_points["reach"] = random_point(rng);
  ep.target_points["destination"] = random_point(rng);
  ep.target_quat = random_unit_quat(rng);
  const double bonuses[] = {0.0, 0.0, 1.0, 100.0, 300.0, 1000.0};
  ep.step_bonus = bonuses[rng.below(6)];
  ep.sparse_accumulated = ep.step_bonus;
  const ParamTable& p = task.params;
  switch (task.id) {
    case TaskId::kCabinet: {
      ep.stage = static_cast<int>(rng.below(5));
      for (int i = 1; i <= ep.stage; ++i) ep.completed_subtasks.push_back(i);
      break;
    }
    case TaskId::kBookshelfSimple:
    case TaskId::kBookshelfHard: {
      const int n_obj = static_cast<int>(p("num_objects"));
      const int n_sub = static_cast<int>(p("num_subtasks"));
      std::vector<int> objects = permutation(n_obj, rng);
      objects.resize(n_sub);
      ep.subtask_objects = objects;
      ep.subtask_destinations = permutation(n_sub, rng);
      ep.stage = static_cast<int>(rng.below(n_sub + 1));
      for (int i = 0; i < ep.stage; ++i) ep.completed_subtasks.push_back(i);
      break;
    }
    case TaskId::kBasketball:
      ep.stage = static_cast<int>(rng.below(2));
      break;
    case TaskId::kMaze: {
      const int count = static_cast<int>(p.vec("checkpoints").size() / 3);
      ep.checkpoint_index = static_cast<int>(rng.below(count + 1));
      ep.stage = ep.checkpoint_index;
      break;
    }
    case TaskId::kTruck: {
      const int n = static_cast<int>(p("num_packages"));
      for (int k = 0; k < n; ++k) ep.packages.push_back(static_cast<PackageCategory>(rng.below(3)));
      break;
    }
    case TaskId::kKitchen: {
      for (int j = 0; j < 4; ++j) {
        if (rng.uniform() < 0.3) ep.completed_subtasks.push_back(j);
      }
      break;
    }
    default:
      break;
  }
  return ep;
}

std::vector<double> fuzz_action(int dim, Rng& rng) {
  std::vector<double> a(dim);
  for (double& x : a) x = rng.uniform(-1.0, 1.0);
  return a;
}

}  // namespace hbench
