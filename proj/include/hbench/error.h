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

#ifndef HBENCH_ERROR_H_
#define HBENCH_ERROR_H_

#include <stdexcept>
#include <string>

namespace hbench {

// All library failures are reported through this type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised by backends when the simulated state stops being finite.
class DivergenceError : public Error {
 public:
  DivergenceError() : Error("simulation diverged") {}
};

}  // namespace hbench

#endif  // HBENCH_ERROR_H_
