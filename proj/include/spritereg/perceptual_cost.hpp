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
#include <deque>
#include <map>
#include <numeric>
#include <span>
#include <string>

#include "spritereg/error.hpp"
#include "spritereg/fiducial.hpp"
#include "spritereg/scene.hpp"

namespace spritereg {

// Weights of the linear combination of fiducial components. A sprite's
// perceptual cost is its screen-area fraction times that combination.
struct CostModel {
  double w_geo = 1.0;  // per pixel^2
  double w_res = 1.0;
  double w_tex = 1.0;
  double w_geom_lod = 1.0;
  double w_shade = 1.0;

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

inline void validate(const CostModel& m) {
  bool any_positive = false;
  for (double w : {m.w_geo, m.w_res, m.w_tex, m.w_geom_lod, m.w_shade}) {
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("cost_model: weights must be finite and >= 0");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw ValidationError("cost_model: at least one weight must be > 0");
}

inline double sprite_cost(const Sprite& sprite, const Fiducial& fid, const CostModel& m) {
  const double error = m.w_geo * fid.geometric_warp_error + m.w_res * fid.resolution_error +
                       m.w_tex * fid.texture_error + m.w_geom_lod * fid.geometry_error +
                       m.w_shade * fid.shading_error;
  return sprite.area_fraction * error;
}

struct AdditiveCombiner {
  double operator()(std::span<const double> costs) const {
    return std::accumulate(costs.begin(), costs.end(), 0.0);
  }
};

// Whole-frame perceptual cost. The combiner hook admits non-additive
// interactions between sprites; the default is the plain sum.
template <typename Combiner = AdditiveCombiner>
double frame_cost(std::span<const double> costs, Combiner combine = {}) {
  return combine(costs);
}

// Rolling window of recent per-frame perceptual costs for each sprite.
class CostHistory {
 public:
  explicit CostHistory(std::size_t window = 8, double lambda = 1.0) : window_(window), lambda_(lambda) {
    if (window_ == 0) throw ValidationError("cost history window must be >= 1");
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw ValidationError("persistence lambda must be > 0");
  }

  std::size_t window() const { return window_; }
  double lambda() const { return lambda_; }

  void push(const std::string& sprite_id, double cost) {
    if (!(cost >= 0.0)) throw ValidationError("cost history: cost must be >= 0");
    auto& buf = buffers_[sprite_id];
    buf.push_back(cost);
    while (buf.size() > window_) buf.pop_front();
  }

  const std::deque<double>& entries(const std::string& sprite_id) const {
    static const std::deque<double> kEmpty;
    auto it = buffers_.find(sprite_id);
    return it == buffers_.end() ? kEmpty : it->second;
  }

  // 1 - exp(-lambda * mean(window)); 0 for an empty history.
  double persistence(const std::string& sprite_id) const {
    const auto& buf = entries(sprite_id);
    if (buf.empty()) return 0.0;
    const double mean = std::accumulate(buf.begin(), buf.end(), 0.0) / static_cast<double>(buf.size());
    return -std::expm1(-lambda_ * mean);
  }

 private:
  std::size_t window_;
  double lambda_;
  std::map<std::string, std::deque<double>> buffers_;
};

}  // namespace spritereg
