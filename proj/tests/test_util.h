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

#ifndef HBENCH_TESTS_TEST_UTIL_H_
#define HBENCH_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "hbench/episode.h"
#include "hbench/math.h"
#include "hbench/scripted_backend.h"
#include "hbench/task.h"
#include "hbench/world_state.h"

namespace hbench::testing {

// A task scene reset with a given seed, ready for direct edits of the
// state before calling the kernel or the task machine.
struct Scene {
  TaskSpec task;
  std::unique_ptr<ScriptedBackend> backend;
  EpisodeState episode;
  WorldState state;
};

inline Scene make_scene(std::string_view task, std::uint64_t seed = 0) {
  Scene s;
  s.task = find_task(task);
  s.backend = std::make_unique<ScriptedBackend>(s.task);
  s.episode = reset(s.task, seed, *s.backend);
  s.state = s.backend->snapshot();
  return s;
}

// Moves a body origin or a site.
inline void set_point(WorldState& s, std::string_view name, const Vec3& p) {
  const PointRef ref = resolve_point(*s.layout, name);
  (ref.is_site ? s.site_pos : s.body_pos)[ref.index] = p;
}

inline void set_aux(WorldState& s, std::string_view name, double q) {
  s.aux_pos[s.layout->aux_joint(name)] = q;
}

// Adds a contact between the first geoms of the two groups.
inline void add_contact(WorldState& s, std::string_view group_a, std::string_view group_b) {
  int a = -1, b = -1;
  const auto& geoms = s.layout->geoms();
  for (int i = 0; i < static_cast<int>(geoms.size()); ++i) {
    if (a < 0 && geoms[i].group == group_a) a = i;
    else if (b < 0 && geoms[i].group == group_b) b = i;
  }
  if (a >= 0 && b >= 0) s.contacts.push_back({a, b, 1.0});
}

// A state whose posture terms all equal one: head above 1.65, torso
// upright, pelvis at rest.
inline void make_upright(WorldState& s) {
  Vec3 head = s.point("head");
  head.z = 1.8;
  set_point(s, "head", head);
  s.z_proj = 1.0;
  s.pelvis_frame_vel = {0.0, 0.0};
}

}  // namespace hbench::testing

#endif  // HBENCH_TESTS_TEST_UTIL_H_
