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

// Independent oracles and random instance builders shared by the unit and
// acceptance suites. Nothing here calls the code paths it is used to check.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "spritereg/knapsack.hpp"
#include "spritereg/scene.hpp"

namespace spritereg::testing {

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

 private:
  std::mt19937_64 engine_;
};

// Sum of squared residuals of the affine map with parameters
// (a, b, tx, c, d, ty): x' = a x + b y + tx, y' = c x + d y + ty.
inline double affine_objective(const std::array<double, 6>& t, const PointSet& src, const PointSet& dst) {
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double x = t[0] * src[i].x + t[1] * src[i].y + t[2] - dst[i].x;
    const double y = t[3] * src[i].x + t[4] * src[i].y + t[5] - dst[i].y;
    sum += x * x + y * y;
  }
  return sum;
}

// Minimizes the affine least-squares objective by coordinate-wise grid
// search with geometric step refinement. Slow, derivative-free, and shares
// no code with the closed-form fit.
inline double brute_force_affine_residual(const PointSet& src, const PointSet& dst) {
  std::array<double, 6> t{1, 0, 0, 0, 1, 0};
  double best = affine_objective(t, src, dst);
  for (double step = 4.0; step > 1e-11; step *= 0.5) {
    for (int pass = 0; pass < 200; ++pass) {
      bool moved = false;
      for (std::size_t k = 0; k < 6; ++k) {
        const double centre = t[k];
        double best_v = centre;
        for (int g = -8; g <= 8; ++g) {
          t[k] = centre + g * step;
          const double f = affine_objective(t, src, dst);
          if (f < best) {
            best = f;
            best_v = t[k];
            moved = true;
          }
        }
        t[k] = best_v;
      }
      if (!moved) break;
    }
  }
  return best;
}

// Dense Riemann sum of integral_0^1 f(x) dx.
inline double riemann(const std::function<double(double)>& f, std::size_t samples = 1000000) {
  const double h = 1.0 / static_cast<double>(samples);
  double acc = 0.0;
  for (std::size_t i = 0; i < samples; ++i) acc += f((static_cast<double>(i) + 0.5) * h);
  return acc * h;
}

// Plain 0/1 knapsack dynamic program over integer weights.
inline double knapsack_dp(const std::vector<double>& benefit, const std::vector<int>& weight, int capacity) {
  std::vector<double> best(static_cast<std::size_t>(capacity) + 1, 0.0);
  for (std::size_t i = 0; i < benefit.size(); ++i) {
    for (int c = capacity; c >= weight[i]; --c) {
      best[static_cast<std::size_t>(c)] =
          std::max(best[static_cast<std::size_t>(c)], best[static_cast<std::size_t>(c - weight[i])] + benefit[i]);
    }
  }
  return best[static_cast<std::size_t>(capacity)];
}

// Exhaustive enumeration over all subsets by bitmask.
inline double knapsack_enumerate(const std::vector<KnapsackItem>& items, double budget) {
  double best = 0.0;
  const std::uint32_t n = static_cast<std::uint32_t>(items.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double b = 0.0;
    double c = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        b += items[i].benefit;
        c += items[i].cost;
      }
    }
    if (c <= budget) best = std::max(best, b);
  }
  return best;
}

// Random knapsack frame: benefits and costs in [0, 10], costs bounded away
// from 0, budget between 0 and the total cost.
inline std::vector<KnapsackItem> random_items(TestRng& rng, std::size_t n) {
  std::vector<KnapsackItem> items;
  for (std::size_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "s%03zu", i);
    items.push_back({id, rng.uniform(0.0, 10.0), rng.uniform(0.05, 10.0)});
  }
  return items;
}

inline double total_cost(const std::vector<KnapsackItem>& items) {
  double c = 0.0;
  for (const auto& it : items) c += it.cost;
  return c;
}

inline PointSet random_points(TestRng& rng, std::size_t n, double lo, double hi) {
  PointSet p;
  for (std::size_t i = 0; i < n; ++i) p.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
  return p;
}

inline PointSet transform(const PointSet& src, double a, double b, double tx, double c, double d, double ty) {
  PointSet out;
  for (const auto& p : src) out.push_back({a * p.x + b * p.y + tx, c * p.x + d * p.y + ty});
  return out;
}

}  // namespace spritereg::testing
