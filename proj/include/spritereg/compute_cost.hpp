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

#include <cmath>

#include "spritereg/error.hpp"
#include "spritereg/scene.hpp"

namespace spritereg {

// Compute cost of rendering actions, in abstract budget units.
//   render: render_base + render_per_polygon * polygons(lod)
//           + render_per_pixel * pixel_count * spatial_factor^2
//   warp:   warp_base + warp_per_pixel * pixel_count
struct ComputeCostModel {
  double render_base = 1.0;
  double render_per_polygon = 0.0;
  double render_per_pixel = 0.0;
  double warp_base = 0.0;
  double warp_per_pixel = 0.0;
  // When false, a scenario in which re-rendering some sprite at full quality
  // is not strictly dearer than warping it is rejected.
  bool allow_nonpositive_savings = false;

  friend bool operator==(const ComputeCostModel&, const ComputeCostModel&) = default;
};

inline void validate(const ComputeCostModel& m) {
  for (double c : {m.render_base, m.render_per_polygon, m.render_per_pixel, m.warp_base,
                   m.warp_per_pixel}) {
    if (!std::isfinite(c) || c < 0.0) {
      throw ValidationError("compute_model: coefficients must be finite and >= 0");
    }
  }
}

inline double render_cost(const Sprite& sprite, const QualityVector& q, const ComputeCostModel& m) {
  const auto lod = static_cast<std::size_t>(q.geometry_lod);
  const double polygons =
      lod < sprite.polygon_budget.size() ? static_cast<double>(sprite.polygon_budget[lod].polygons) : 0.0;
  const double pixels = static_cast<double>(sprite.pixel_count);
  return m.render_base + m.render_per_polygon * polygons +
         m.render_per_pixel * pixels * q.spatial_factor * q.spatial_factor;
}

inline double warp_cost(const Sprite& sprite, const ComputeCostModel& m) {
  return m.warp_base + m.warp_per_pixel * static_cast<double>(sprite.pixel_count);
}

}  // namespace spritereg
