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

#ifndef HBENCH_TOLERANCE_H_
#define HBENCH_TOLERANCE_H_

#include <limits>
#include <string>
#include <string_view>

namespace hbench {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

enum class Sigmoid { kGaussian, kLinear, kQuadratic };

std::string_view to_string(Sigmoid sigmoid);
Sigmoid sigmoid_from_string(std::string_view name);

// Shape of the decay outside the bounds. The default matches the
// dm_control tolerance default (gaussian, 0.1 at one margin away).
struct ToleranceShape {
  Sigmoid sigmoid = Sigmoid::kGaussian;
  double value_at_margin = 0.1;

  friend bool operator==(const ToleranceShape&,
                         const ToleranceShape&) = default;
};

struct ToleranceSpec {
  Bounds bounds;
  double margin = 0.0;
  ToleranceShape shape;
};

// Returns 1 for x in [lower, upper] and decays towards 0 with the distance
// to the nearest bound, reaching `value_at_margin` at distance `margin`.
// A zero margin gives the indicator of the bounds.
//
// Throws Error on non-finite x, lower > upper, negative margin, or a
// value_at_margin outside (0, 1).
double tolerance(double x, const ToleranceSpec& spec);

inline double tolerance(double x, Bounds bounds, double margin,
                        ToleranceShape shape = {}) {
  return tolerance(x, ToleranceSpec{bounds, margin, shape});
}

}  // namespace hbench

#endif  // HBENCH_TOLERANCE_H_
