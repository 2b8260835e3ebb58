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

// Per-frame regulation: decide for every sprite whether to re-render it (and
// at what quality) or to warp its last rendered image, minimizing expected
// perceptual cost within the frame's compute budget.

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spritereg/attention.hpp"
#include "spritereg/compute_cost.hpp"
#include "spritereg/error.hpp"
#include "spritereg/fiducial.hpp"
#include "spritereg/knapsack.hpp"
#include "spritereg/perceptual_cost.hpp"
#include "spritereg/scene.hpp"

namespace spritereg {

// Re-rendering a sprite that costs no more than warping it is always chosen;
// such sprites have no refinement rate.
class AlwaysRenderSprite : public std::domain_error {
 public:
  explicit AlwaysRenderSprite(const std::string& id)
      : std::domain_error("always-render sprite '" + id + "': marginal compute cost <= 0") {}
};

// ---------------------------------------------------------------------------
// Marginal quantities

inline double marginal_compute_cost(const Sprite& sprite, const QualityVector& q, const ComputeCostModel& m) {
  return render_cost(sprite, q, m) - warp_cost(sprite, m);
}

inline double warp_perceptual_cost(const Sprite& sprite, const CostModel& cost_model,
                                   const QualityErrorModel& forms = {}) {
  return sprite_cost(sprite, evaluate_fiducial(sprite, RenderAction::warp(), sprite.points_gold, forms), cost_model);
}

inline double rerender_perceptual_cost(const Sprite& sprite, const QualityVector& q, const CostModel& cost_model,
                                       const QualityErrorModel& forms = {}) {
  return sprite_cost(sprite, quality_errors(sprite, q, forms), cost_model);
}

// Expected cost removed by re-rendering at q instead of warping.
inline double marginal_perceptual_benefit(const Sprite& sprite, const AttentionModel& attention,
                                          const CostModel& cost_model,
                                          const QualityVector& q = QualityVector::finest(),
                                          const QualityErrorModel& forms = {}) {
  const double w = attention_weight(attention, sprite.id);
  return w * (warp_perceptual_cost(sprite, cost_model, forms) - rerender_perceptual_cost(sprite, q, cost_model, forms));
}

inline double refinement_rate(const std::string& sprite_id, double benefit, double compute) {
  if (!(compute > 0.0)) throw AlwaysRenderSprite(sprite_id);
  return benefit / compute;
}

// ---------------------------------------------------------------------------
// Policies

enum class PolicyKind { kGreedy, kSahni, kMultidim, kRenderAll, kWarpAll, kOracle };

struct Policy {
  PolicyKind kind = PolicyKind::kGreedy;
  int k = 0;  // seed size for kSahni

  std::string label() const {
    switch (kind) {
      case PolicyKind::kGreedy:
        return "greedy";
      case PolicyKind::kSahni:
        return "sahni:" + std::to_string(k);
      case PolicyKind::kMultidim:
        return "multidim";
      case PolicyKind::kRenderAll:
        return "render-all";
      case PolicyKind::kWarpAll:
        return "warp-all";
      case PolicyKind::kOracle:
        return "oracle";
    }
    return "unknown";
  }

  static Policy parse(const std::string& s) {
    if (s == "greedy") return {PolicyKind::kGreedy, 0};
    if (s == "multidim") return {PolicyKind::kMultidim, 0};
    if (s == "render-all") return {PolicyKind::kRenderAll, 0};
    if (s == "warp-all") return {PolicyKind::kWarpAll, 0};
    if (s == "oracle") return {PolicyKind::kOracle, 0};
    if (s.rfind("sahni:", 0) == 0) {
      int k = -1;
      const char* first = s.data() + 6;
      const char* last = s.data() + s.size();
      auto [ptr, ec] = std::from_chars(first, last, k);
      if (ec == std::errc() && ptr == last && k >= 0 && k <= kMaxSahniSeedSize) return {PolicyKind::kSahni, k};
    }
    throw ValidationError("unknown policy '" + s + "' (expected greedy|sahni:k|multidim|render-all|warp-all|oracle)");
  }

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct RegulatorConfig {
  Policy policy;
  Policy multidim_base;  // knapsack used inside the multidim pass: greedy or sahni:k
  double spatial_step = 0.75;
  double min_spatial_factor = 0.25;
};

inline void validate(const RegulatorConfig& c) {
  if (c.multidim_base.kind != PolicyKind::kGreedy && c.multidim_base.kind != PolicyKind::kSahni) {
    throw ValidationError("regulator: multidim_base must be greedy or sahni:k");
  }
  if (!(c.spatial_step > 0.0 && c.spatial_step < 1.0)) throw ValidationError("regulator: spatial_step must be in (0,1)");
  if (!(c.min_spatial_factor > 0.0 && c.min_spatial_factor <= 1.0)) {
    throw ValidationError("regulator: min_spatial_factor must be in (0,1]");
  }
}

// Everything the regulator needs to plan one frame. Sprites are ordered by id
// and attention[i] is the attention weight of sprites[i].
struct FrameProblem {
  std::vector<Sprite> sprites;
  std::vector<double> attention;
  CostModel cost_model;
  QualityErrorModel error_forms;
  ComputeCostModel compute_model;
  double budget = 0.0;
};

inline FrameProblem make_problem(std::vector<Sprite> sprites, const AttentionModel& attention,
                                 const CostModel& cost_model, const QualityErrorModel& forms,
                                 const ComputeCostModel& compute_model, double budget) {
  std::sort(sprites.begin(), sprites.end(), [](const Sprite& a, const Sprite& b) { return a.id < b.id; });
  FrameProblem p;
  for (const auto& s : sprites) p.attention.push_back(attention_weight(attention, s.id));
  p.sprites = std::move(sprites);
  p.cost_model = cost_model;
  p.error_forms = forms;
  p.compute_model = compute_model;
  p.budget = budget;
  return p;
}

struct PlannedSprite {
  std::string id;
  RenderAction action;
  Fiducial fiducial;
  double perceptual_cost = 0.0;  // C^P under the chosen action
  double expected_cost = 0.0;    // attention weight * perceptual_cost
  double compute = 0.0;
  double benefit = 0.0;  // knapsack value; 0 when not a candidate
  double marginal_compute = 0.0;
  std::optional<double> rate;  // refinement rate, candidates only
};

struct FramePlan {
  std::vector<PlannedSprite> sprites;
  double expected_cost = 0.0;
  double compute_spend = 0.0;
  std::string policy;
  std::vector<std::string> notes;

  const PlannedSprite& at(const std::string& id) const {
    for (const auto& s : sprites) {
      if (s.id == id) return s;
    }
    throw ValidationError("plan has no sprite '" + id + "'");
  }
};

namespace detail {

// Per-sprite split of the frame into forced re-renders and knapsack candidates
// for a given assignment of re-render qualities.
struct FrameSplit {
  std::vector<KnapsackItem> items;
  std::vector<std::size_t> item_sprite;    // item index -> sprite index
  std::vector<std::ptrdiff_t> sprite_item;  // sprite index -> item index or -1
  std::vector<bool> forced;                 // re-render regardless of budget
  std::vector<double> warp_expected;        // expected cost if warped
  std::vector<double> render_expected;      // expected cost if re-rendered at quality
  std::vector<std::string> notes;
};

inline FrameSplit split_frame(const FrameProblem& p, const std::vector<QualityVector>& quality) {
  FrameSplit s;
  const std::size_t n = p.sprites.size();
  s.sprite_item.assign(n, -1);
  s.forced.assign(n, false);
  s.warp_expected.assign(n, 0.0);
  s.render_expected.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Sprite& sp = p.sprites[i];
    const double w = p.attention[i];
    s.render_expected[i] = w * rerender_perceptual_cost(sp, quality[i], p.cost_model, p.error_forms);
    if (!sp.warp_eligible()) {
      s.forced[i] = true;
      continue;
    }
    s.warp_expected[i] = w * warp_perceptual_cost(sp, p.cost_model, p.error_forms);
    const double dc = marginal_compute_cost(sp, quality[i], p.compute_model);
    if (!(dc > 0.0)) {
      s.forced[i] = true;
      s.notes.push_back("always-render: " + sp.id);
      continue;
    }
    s.sprite_item[i] = static_cast<std::ptrdiff_t>(s.items.size());
    s.item_sprite.push_back(i);
    s.items.push_back({sp.id, s.warp_expected[i] - s.render_expected[i], dc});
  }
  return s;
}

inline double baseline_spend(const FrameProblem& p, const std::vector<QualityVector>& quality,
                             const FrameSplit& split) {
  double spend = 0.0;
  for (std::size_t i = 0; i < p.sprites.size(); ++i) {
    spend += split.forced[i] ? render_cost(p.sprites[i], quality[i], p.compute_model)
                             : warp_cost(p.sprites[i], p.compute_model);
  }
  return spend;
}

inline FramePlan assemble(const FrameProblem& p, const std::vector<QualityVector>& quality, const FrameSplit& split,
                          const std::vector<bool>& rerender, const std::string& label) {
  FramePlan plan;
  plan.policy = label;
  plan.notes = split.notes;
  for (std::size_t i = 0; i < p.sprites.size(); ++i) {
    const Sprite& sp = p.sprites[i];
    PlannedSprite ps;
    ps.id = sp.id;
    const bool render = split.forced[i] || rerender[i];
    ps.action = render ? RenderAction::rerender(quality[i]) : RenderAction::warp();
    ps.fiducial = evaluate_fiducial(sp, ps.action, sp.points_gold, p.error_forms);
    ps.perceptual_cost = sprite_cost(sp, ps.fiducial, p.cost_model);
    ps.expected_cost = p.attention[i] * ps.perceptual_cost;
    ps.compute = render ? render_cost(sp, quality[i], p.compute_model) : warp_cost(sp, p.compute_model);
    if (split.sprite_item[i] >= 0) {
      const auto& item = split.items[static_cast<std::size_t>(split.sprite_item[i])];
      ps.benefit = item.benefit;
      ps.marginal_compute = item.cost;
      ps.rate = refinement_rate(sp.id, item.benefit, item.cost);
    }
    plan.expected_cost += ps.expected_cost;
    plan.compute_spend += ps.compute;
    plan.sprites.push_back(std::move(ps));
  }
  return plan;
}

// Stalest-first fill used by render-all when the budget cannot cover every
// sprite.
inline std::vector<bool> stalest_first(const FrameProblem& p, const FrameSplit& split, double residual) {
  std::vector<std::size_t> order(split.items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto age_of = [&](std::size_t item) { return p.sprites[split.item_sprite[item]].last_render->frame; };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return age_of(a) < age_of(b); });
  std::vector<bool> chosen(p.sprites.size(), false);
  double used = 0.0;
  for (std::size_t item : order) {
    if (used + split.items[item].cost <= residual) {
      used += split.items[item].cost;
      chosen[split.item_sprite[item]] = true;
    }
  }
  return chosen;
}

inline KnapsackSelection run_knapsack(const Policy& policy, const std::vector<KnapsackItem>& items, double residual) {
  switch (policy.kind) {
    case PolicyKind::kGreedy:
      return greedy_knapsack(items, residual);
    case PolicyKind::kSahni:
      return sahni_knapsack(items, residual, policy.k);
    case PolicyKind::kOracle:
      return exact_knapsack_oracle(items, residual);
    default:
      throw ValidationError("run_knapsack: not a knapsack policy: " + policy.label());
  }
}

struct KnapsackOutcome {
  FramePlan plan;
  FrameSplit split;
  KnapsackSelection selection;
};

// Plans the frame for fixed re-render qualities. `policy` must not be
// kMultidim.
inline KnapsackOutcome plan_fixed_quality(const FrameProblem& p, const std::vector<QualityVector>& quality,
                                          const Policy& policy) {
  KnapsackOutcome out;
  out.split = split_frame(p, quality);
  const double baseline = baseline_spend(p, quality, out.split);
  if (baseline > p.budget) {
    throw InfeasibleBudget("frame budget " + std::to_string(p.budget) + " is below the baseline spend " +
                           std::to_string(baseline) +
                           " (all sprites warped plus forced re-renders); reduce the sprite set or degrade quality");
  }
  double residual = p.budget - baseline;
  // Summation order differs between the knapsack and the final accounting;
  // shrink the residual until the assembled plan is within budget.
  for (int attempt = 0;; ++attempt) {
    std::vector<bool> rerender(p.sprites.size(), false);
    switch (policy.kind) {
      case PolicyKind::kWarpAll:
        out.selection = {};
        out.selection.branch = "warp-all";
        break;
      case PolicyKind::kRenderAll: {
        rerender = stalest_first(p, out.split, residual);
        out.selection = {};
        out.selection.branch = "render-all";
        break;
      }
      default:
        out.selection = run_knapsack(policy, out.split.items, residual);
        for (std::size_t item : out.selection.chosen) rerender[out.split.item_sprite[item]] = true;
    }
    out.plan = assemble(p, quality, out.split, rerender, policy.label());
    if (out.plan.compute_spend <= p.budget) break;
    if (attempt >= 8) throw InfeasibleBudget("could not assemble a plan within the frame budget");
    residual -= (out.plan.compute_spend - p.budget) * 2.0 + std::numeric_limits<double>::epsilon() * p.budget;
    residual = std::max(residual, 0.0);
  }
  if (policy.kind == PolicyKind::kGreedy || policy.kind == PolicyKind::kSahni || policy.kind == PolicyKind::kOracle) {
    out.plan.notes.push_back("knapsack branch: " + out.selection.branch);
  }
  return out;
}

enum class Dimension { kTexture, kGeometry, kSpatial, kShading };

inline constexpr std::array<Dimension, 4> kDegradationOrder = {Dimension::kTexture, Dimension::kGeometry,
                                                               Dimension::kSpatial, Dimension::kShading};

inline const char* to_string(Dimension d) {
  switch (d) {
    case Dimension::kTexture:
      return "texture";
    case Dimension::kGeometry:
      return "geometry";
    case Dimension::kSpatial:
      return "spatial";
    case Dimension::kShading:
      return "shading";
  }
  return "?";
}

// One predefined coarsening step along d, or nullopt at the end of the range.
inline std::optional<QualityVector> degrade(const Sprite& s, QualityVector q, Dimension d, const RegulatorConfig& cfg) {
  switch (d) {
    case Dimension::kTexture:
      if (q.texture_lod >= s.max_texture_lod) return std::nullopt;
      ++q.texture_lod;
      return q;
    case Dimension::kGeometry:
      if (static_cast<std::size_t>(q.geometry_lod) + 1 >= s.polygon_budget.size()) return std::nullopt;
      ++q.geometry_lod;
      return q;
    case Dimension::kSpatial: {
      const double next = q.spatial_factor * cfg.spatial_step;
      if (next < cfg.min_spatial_factor) return std::nullopt;
      q.spatial_factor = next;
      return q;
    }
    case Dimension::kShading:
      if (q.shading_level >= s.max_shading_level) return std::nullopt;
      ++q.shading_level;
      return q;
  }
  return std::nullopt;
}

}  // namespace detail

// The knapsack the regulator solves for a frame at full re-render quality:
// candidates plus the budget left after warping them and paying for forced
// re-renders.
struct KnapsackInstance {
  std::vector<KnapsackItem> items;
  double residual = 0.0;
};

inline KnapsackInstance knapsack_instance(const FrameProblem& p) {
  const std::vector<QualityVector> quality(p.sprites.size(), QualityVector::finest());
  auto split = detail::split_frame(p, quality);
  const double baseline = detail::baseline_spend(p, quality, split);
  if (baseline > p.budget) throw InfeasibleBudget("frame budget is below the baseline spend");
  return {std::move(split.items), p.budget - baseline};
}

// Myopic multi-dimension pass. Starting from the knapsack plan at full
// quality, walks texture, geometry, spatial and shading in that order; within
// a dimension, tries one degradation step per sprite and keeps it only if the
// re-planned frame has strictly lower expected cost, repeating until a sweep
// makes no progress. A dimension is skipped when the benefit of the first
// sprite the knapsack had to drop is below the smallest cost increase the
// step would impose on a re-rendered sprite.
inline FramePlan multidim_greedy(const FrameProblem& p, const RegulatorConfig& cfg) {
  validate(cfg);
  std::vector<QualityVector> quality(p.sprites.size(), QualityVector::finest());
  detail::KnapsackOutcome incumbent = detail::plan_fixed_quality(p, quality, cfg.multidim_base);
  std::vector<std::string> notes;
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "baseline expected cost: %.9g", incumbent.plan.expected_cost);
    notes.emplace_back(buf);
  }
  notes.push_back("degradation applies to re-render quality; warped sprites keep their stored quality");

  for (detail::Dimension dim : detail::kDegradationOrder) {
    int accepted = 0;
    for (;;) {
      // Largest gain available: the highest-rate candidate left out.
      double max_gain = 0.0;
      for (std::size_t item : rate_order(incumbent.split.items)) {
        if (incumbent.split.items[item].benefit > 0.0 && !incumbent.selection.contains(item)) {
          max_gain = incumbent.split.items[item].benefit;
          break;
        }
      }
      double min_increase = std::numeric_limits<double>::infinity();
      bool any_step = false;
      for (std::size_t i = 0; i < p.sprites.size(); ++i) {
        auto next = detail::degrade(p.sprites[i], quality[i], dim, cfg);
        if (!next) continue;
        any_step = true;
        if (incumbent.plan.sprites[i].action.is_warp()) continue;
        const double inc = p.attention[i] * (rerender_perceptual_cost(p.sprites[i], *next, p.cost_model, p.error_forms) -
                                             rerender_perceptual_cost(p.sprites[i], quality[i], p.cost_model, p.error_forms));
        min_increase = std::min(min_increase, inc);
      }
      if (!any_step || max_gain <= 0.0 || max_gain < min_increase) {
        if (accepted == 0) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "dimension %s: pruned (gain %.9g)", detail::to_string(dim), max_gain);
          notes.emplace_back(buf);
        }
        break;
      }
      bool improved = false;
      for (std::size_t i = 0; i < p.sprites.size(); ++i) {
        auto next = detail::degrade(p.sprites[i], quality[i], dim, cfg);
        if (!next) continue;
        auto trial_quality = quality;
        trial_quality[i] = *next;
        detail::KnapsackOutcome trial = detail::plan_fixed_quality(p, trial_quality, cfg.multidim_base);
        if (trial.plan.expected_cost < incumbent.plan.expected_cost) {
          quality = std::move(trial_quality);
          incumbent = std::move(trial);
          improved = true;
          ++accepted;
        }
      }
      if (!improved) break;
    }
    if (accepted > 0) {
      notes.push_back(std::string("dimension ") + detail::to_string(dim) + ": " + std::to_string(accepted) +
                      " step(s) accepted");
    }
  }

  FramePlan plan = std::move(incumbent.plan);
  plan.policy = Policy{PolicyKind::kMultidim, 0}.label();
  plan.notes.insert(plan.notes.end(), notes.begin(), notes.end());
  return plan;
}

// Plans one frame under the configured policy.
inline FramePlan plan_frame(const FrameProblem& p, const RegulatorConfig& cfg) {
  if (cfg.policy.kind == PolicyKind::kMultidim) return multidim_greedy(p, cfg);
  const std::vector<QualityVector> quality(p.sprites.size(), QualityVector::finest());
  return detail::plan_fixed_quality(p, quality, cfg.policy).plan;
}

}  // namespace spritereg
