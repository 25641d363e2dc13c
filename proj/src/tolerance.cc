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

#include "hbench/tolerance.h"

#include <cmath>
#include <string>

#include "hbench/error.h"

namespace hbench {

std::string_view to_string(Sigmoid sigmoid) {
  switch (sigmoid) {
    case Sigmoid::kGaussian:
      return "gaussian";
    case Sigmoid::kLinear:
      return "linear";
    case Sigmoid::kQuadratic:
      return "quadratic";
  }
  return "gaussian";
}

Sigmoid sigmoid_from_string(std::string_view name) {
  if (name == "gaussian") return Sigmoid::kGaussian;
  if (name == "linear") return Sigmoid::kLinear;
  if (name == "quadratic") return Sigmoid::kQuadratic;
  throw Error("unknown sigmoid: " + std::string(name));
}

namespace {

// Maps a normalized distance (distance / margin, >= 0) to (0, 1].
double decay(double d, const ToleranceShape& shape) {
  const double v = shape.value_at_margin;
  switch (shape.sigmoid) {
    case Sigmoid::kGaussian: {
      const double scale = std::sqrt(-2.0 * std::log(v));
      const double s = d * scale;
      return std::exp(-0.5 * s * s);
    }
    case Sigmoid::kLinear: {
      const double s = d * (1.0 - v);
      return s < 1.0 ? 1.0 - s : 0.0;
    }
    case Sigmoid::kQuadratic: {
      const double s = d * std::sqrt(1.0 - v);
      return s < 1.0 ? 1.0 - s * s : 0.0;
    }
  }
  return 0.0;
}

}  // namespace

double tolerance(double x, const ToleranceSpec& spec) {
  if (!std::isfinite(x)) throw Error("non-finite input");
  const double lower = spec.bounds.lower;
  const double upper = spec.bounds.upper;
  if (!(lower <= upper)) throw Error("invalid bounds");
  if (!(spec.margin >= 0.0)) throw Error("margin must be non-negative");
  const double v = spec.shape.value_at_margin;
  if (!(v > 0.0 && v < 1.0)) throw Error("value_at_margin must be in (0, 1)");

  if (lower <= x && x <= upper) return 1.0;
  if (spec.margin == 0.0) return 0.0;
  const double distance = x < lower ? lower - x : x - upper;
  return decay(distance / spec.margin, spec.shape);
}

}  // namespace hbench
