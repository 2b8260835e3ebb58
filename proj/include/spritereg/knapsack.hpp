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

// 0/1 knapsack over re-render candidates: value is the expected perceptual
// benefit of re-rendering instead of warping, weight the extra compute.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spritereg/error.hpp"

namespace spritereg {

struct KnapsackItem {
  std::string id;
  double benefit = 0.0;  // expected perceptual cost removed by re-rendering
  double cost = 0.0;     // marginal compute, must be > 0

  double rate() const { return benefit / cost; }
};

struct KnapsackSelection {
  std::vector<std::size_t> chosen;  // indices into the item list, ascending
  double benefit = 0.0;
  double cost = 0.0;
  std::string branch;  // which construction produced the selection

  bool contains(std::size_t i) const { return std::binary_search(chosen.begin(), chosen.end(), i); }
};

namespace detail {

inline void check_items(const std::vector<KnapsackItem>& items, double budget) {
  if (!std::isfinite(budget) || budget < 0.0) throw ValidationError("knapsack: budget must be finite and >= 0");
  for (const auto& it : items) {
    if (!(it.cost > 0.0) || !std::isfinite(it.cost) || !std::isfinite(it.benefit)) {
      throw ValidationError("knapsack: item '" + it.id + "' needs finite benefit and cost > 0");
    }
  }
}

inline KnapsackSelection finish(const std::vector<KnapsackItem>& items, std::vector<std::size_t> chosen,
                                std::string branch) {
  std::sort(chosen.begin(), chosen.end());
  KnapsackSelection s;
  for (std::size_t i : chosen) {
    s.benefit += items[i].benefit;
    s.cost += items[i].cost;
  }
  s.chosen = std::move(chosen);
  s.branch = std::move(branch);
  return s;
}

}  // namespace detail

// Indices sorted by nonincreasing rate; ties by larger benefit, then id.
inline std::vector<std::size_t> rate_order(const std::vector<KnapsackItem>& items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = items[a].rate();
    const double rb = items[b].rate();
    if (ra != rb) return ra > rb;
    if (items[a].benefit != items[b].benefit) return items[a].benefit > items[b].benefit;
    return items[a].id < items[b].id;
  });
  return order;
}

// Walks items in rate order, taking each positive-benefit item that still
// fits and skipping those that do not.
inline KnapsackSelection greedy_by_rate(const std::vector<KnapsackItem>& items, double budget) {
  detail::check_items(items, budget);
  std::vector<std::size_t> chosen;
  double used = 0.0;
  for (std::size_t i : rate_order(items)) {
    if (items[i].benefit <= 0.0) continue;
    if (used + items[i].cost <= budget) {
      used += items[i].cost;
      chosen.push_back(i);
    }
  }
  return detail::finish(items, std::move(chosen), "greedy");
}

// Best of the rate-ordered greedy fill and the single most valuable item that
// fits on its own. Guaranteed at least half the optimal benefit.
inline KnapsackSelection greedy_knapsack(const std::vector<KnapsackItem>& items, double budget) {
  KnapsackSelection greedy = greedy_by_rate(items, budget);
  std::ptrdiff_t best = -1;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (it.benefit <= 0.0 || it.cost > budget) continue;
    if (best < 0) {
      best = static_cast<std::ptrdiff_t>(i);
      continue;
    }
    const auto& b = items[static_cast<std::size_t>(best)];
    if (it.benefit > b.benefit || (it.benefit == b.benefit && (it.cost < b.cost || (it.cost == b.cost && it.id < b.id)))) {
      best = static_cast<std::ptrdiff_t>(i);
    }
  }
  if (best >= 0 && items[static_cast<std::size_t>(best)].benefit > greedy.benefit) {
    return detail::finish(items, {static_cast<std::size_t>(best)}, "best-single");
  }
  return greedy;
}

inline constexpr int kMaxSahniSeedSize = 3;

// Limited subset search: every feasible seed set of at most k items is
// completed by a rate-ordered fill restricted to items no more valuable than
// the least valuable seed. The best completion wins. At least k/(k+1) of the
// optimum; k = 0 is the plain rate-ordered fill.
inline KnapsackSelection sahni_knapsack(const std::vector<KnapsackItem>& items, double budget, int k) {
  if (k < 0 || k > kMaxSahniSeedSize) throw ValidationError("sahni_knapsack: seed size must be in [0, 3]");
  KnapsackSelection best = greedy_by_rate(items, budget);
  best.branch = "sahni:" + std::to_string(k);
  if (k == 0) return best;

  const auto order = rate_order(items);
  std::vector<std::size_t> useful;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].benefit > 0.0 && items[i].cost <= budget) useful.push_back(i);
  }

  std::vector<std::size_t> seed;
  auto complete = [&]() {
    double used = 0.0;
    double cap = std::numeric_limits<double>::infinity();
    for (std::size_t i : seed) {
      used += items[i].cost;
      cap = std::min(cap, items[i].benefit);
    }
    if (used > budget) return;
    std::vector<std::size_t> chosen = seed;
    for (std::size_t i : order) {
      if (items[i].benefit <= 0.0 || items[i].benefit > cap) continue;
      if (std::find(seed.begin(), seed.end(), i) != seed.end()) continue;
      if (used + items[i].cost <= budget) {
        used += items[i].cost;
        chosen.push_back(i);
      }
    }
    KnapsackSelection s = detail::finish(items, std::move(chosen), best.branch);
    if (s.benefit > best.benefit) best = std::move(s);
  };

  // Seeds enumerated by size, then lexicographically over item indices.
  auto recurse = [&](auto&& self, std::size_t start, int remaining) -> void {
    if (remaining == 0) {
      complete();
      return;
    }
    for (std::size_t u = start; u < useful.size(); ++u) {
      seed.push_back(useful[u]);
      self(self, u + 1, remaining - 1);
      seed.pop_back();
    }
  };
  for (int size = 1; size <= k; ++size) recurse(recurse, 0, size);
  return best;
}

inline constexpr std::size_t kMaxOracleItems = 22;

// Exhaustive optimum by depth-first enumeration. Ties prefer lower total cost.
inline KnapsackSelection exact_knapsack_oracle(const std::vector<KnapsackItem>& items, double budget) {
  detail::check_items(items, budget);
  if (items.size() > kMaxOracleItems) {
    throw ValidationError("exact_knapsack_oracle: at most 22 candidates, got " + std::to_string(items.size()));
  }
  std::vector<std::size_t> current;
  std::vector<std::size_t> best_set;
  double best_benefit = 0.0;
  double best_cost = 0.0;

  // suffix[i]: total positive benefit of items i.. for bounding.
  std::vector<double> suffix(items.size() + 1, 0.0);
  for (std::size_t i = items.size(); i-- > 0;) suffix[i] = suffix[i + 1] + std::max(items[i].benefit, 0.0);

  auto dfs = [&](auto&& self, std::size_t i, double benefit, double cost) -> void {
    if (benefit > best_benefit || (benefit == best_benefit && cost < best_cost)) {
      best_benefit = benefit;
      best_cost = cost;
      best_set = current;
    }
    if (i == items.size() || benefit + suffix[i] < best_benefit) return;
    if (items[i].benefit > 0.0 && cost + items[i].cost <= budget) {
      current.push_back(i);
      self(self, i + 1, benefit + items[i].benefit, cost + items[i].cost);
      current.pop_back();
    }
    self(self, i + 1, benefit, cost);
  };
  dfs(dfs, 0, 0.0, 0.0);
  return detail::finish(items, std::move(best_set), "oracle");
}

}  // namespace spritereg
