// Copyright 2026 The spritereg Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spritereg {

// Malformed input: bad JSON, unknown keys, violated data invariants, or an
// out-of-range argument to one of the library operations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The frame budget cannot cover the cheapest feasible plan (every sprite
// warped, plus the sprites that must be re-rendered).
class InfeasibleBudget : public std::runtime_error {
 public:
  InfeasibleBudget(const std::string& what, std::ptrdiff_t frame = -1)
      : std::runtime_error(what), frame_(frame) {}

  // Frame index the failure occurred at, or -1 when not known.
  std::ptrdiff_t frame() const { return frame_; }

 private:
  std::ptrdiff_t frame_;
};

}  // namespace spritereg
