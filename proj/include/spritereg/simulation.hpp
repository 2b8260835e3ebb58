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

// Frame loop: builds each frame's attention model and regulation problem,
// applies the regulator's plan, advances sprite render state and cost
// histories, and records per-frame traces.

#pragma once

#include <cstdio>
#include <future>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "spritereg/attention.hpp"
#include "spritereg/config.hpp"
#include "spritereg/error.hpp"
#include "spritereg/fiducial.hpp"
#include "spritereg/perceptual_cost.hpp"
#include "spritereg/regulator.hpp"
#include "spritereg/scenario.hpp"

namespace spritereg {

inline constexpr const char* kFlagObjectNormalized = "object_attention_normalized";

struct SpriteTrace {
  std::string id;
  RenderAction action;
  std::size_t age = 0;  // frames since the last re-render, before this frame
  Fiducial fiducial;
  double perceptual_cost = 0.0;
  double attention = 0.0;         // probability (mean attention level for continuous)
  double attention_weight = 0.0;  // multiplier applied to perceptual_cost
  double expected_cost = 0.0;
  double compute = 0.0;
};

struct FrameTrace {
  std::size_t frame = 0;
  std::string policy;
  std::vector<SpriteTrace> sprites;
  double expected_cost = 0.0;
  double raw_cost = 0.0;  // plain sum of sprite perceptual costs
  double spend = 0.0;
  double budget = 0.0;
  double slack = 0.0;
  std::vector<std::string> flags;
};

struct SimState {
  std::map<std::string, RenderRecord> last_render;
  CostHistory history;
};

inline SimState initial_state(const SimConfig& config) {
  return SimState{{}, CostHistory(config.attention.window, config.attention.lambda)};
}

// The scenario with any compute-model overrides from the config applied and
// re-validated.
inline Scenario effective_scenario(const Scenario& scenario, const SimConfig& config) {
  Scenario out = scenario;
  out.compute_model = compute_model_from_json(config.compute_model_overrides, scenario.compute_model);
  if (!(out.compute_model == scenario.compute_model)) validate(out);
  return out;
}

inline AttentionModel build_attention(const Scenario& scenario, std::size_t t, const SimConfig& config,
                                      const CostHistory& history, std::vector<std::string>* flags = nullptr) {
  const auto& a = config.attention;
  auto add_flag = [&](const std::string& f) {
    if (flags) flags->push_back(f);
  };
  ObjectAttention objects = attention_from_groups(scenario.objects, scenario.frames.at(t), a.groups, a.alpha);
  objects = condition_on_cost(objects, history, a.beta);
  if (a.kind == AttentionKind::kObject) {
    add_flag(kFlagObjectNormalized);
    return objects;
  }

  std::map<std::string, double> probability;
  if (!a.sprite_probabilities.empty()) {
    for (const auto& s : scenario.sprites) {
      auto it = a.sprite_probabilities.find(s.id);
      if (it == a.sprite_probabilities.end()) {
        throw ValidationError("attention: sprite_probabilities has no entry for sprite '" + s.id + "'");
      }
      probability[s.id] = it->second;
    }
    add_flag("explicit_sprite_probabilities");
  } else if (!a.group_probabilities.empty()) {
    for (const auto& s : scenario.sprites) {
      auto it = a.group_probabilities.find(scenario.object(s.object_id).group);
      probability[s.id] = it == a.group_probabilities.end() ? 0.0 : it->second;
    }
    add_flag("group_probabilities");
  } else {
    probability = flatten(objects).probability;
    add_flag(kFlagObjectNormalized);
  }

  if (a.kind == AttentionKind::kBinary) {
    BinaryAttention b;
    b.alpha = a.alpha;
    b.probability = std::move(probability);
    return b;
  }
  return two_level_density(probability, a.bins, make_attenuation(a));
}

inline std::vector<Sprite> sprites_with_state(const Scenario& scenario, std::size_t t, const SimState& state) {
  std::vector<Sprite> sprites;
  for (const auto& info : scenario.sprites) {
    std::optional<RenderRecord> rec;
    if (auto it = state.last_render.find(info.id); it != state.last_render.end()) rec = it->second;
    sprites.push_back(make_sprite(info, scenario.frames.at(t).at(info.id), std::move(rec)));
  }
  return sprites;
}

inline FrameProblem frame_problem(const Scenario& scenario, std::size_t t, const SimState& state,
                                  const SimConfig& config, const AttentionModel& attention) {
  return make_problem(sprites_with_state(scenario, t, state), attention, config.cost_model, config.error_forms,
                      scenario.compute_model, scenario.frame_budget);
}

// Applies `plan` to frame t. Re-rendered sprites take the frame's gold points
// and the chosen quality as their new render record; every sprite's realized
// perceptual cost is pushed onto its history.
inline std::pair<SimState, FrameTrace> run_frame(SimState state, const Scenario& scenario, std::size_t t,
                                                 const FramePlan& plan, const AttentionModel& attention,
                                                 const SimConfig& config) {
  std::map<std::string, const PlannedSprite*> by_id;
  for (const auto& ps : plan.sprites) {
    if (!by_id.emplace(ps.id, &ps).second) throw ValidationError("plan lists sprite '" + ps.id + "' twice");
    bool known = false;
    for (const auto& s : scenario.sprites) known = known || s.id == ps.id;
    if (!known) throw ValidationError("plan references unknown sprite '" + ps.id + "'");
  }

  FrameTrace trace;
  trace.frame = t;
  trace.policy = plan.policy;
  trace.budget = scenario.frame_budget;
  const auto sprites = sprites_with_state(scenario, t, state);
  std::vector<double> raw;
  for (const auto& sp : sprites) {
    auto it = by_id.find(sp.id);
    if (it == by_id.end()) throw ValidationError("plan has no action for sprite '" + sp.id + "'");
    const RenderAction& action = it->second->action;
    SpriteTrace st;
    st.id = sp.id;
    st.action = action;
    st.age = sp.last_render ? t - sp.last_render->frame : 0;
    st.fiducial = evaluate_fiducial(sp, action, sp.points_gold, config.error_forms);
    st.perceptual_cost = sprite_cost(sp, st.fiducial, config.cost_model);
    st.attention = attention_probability(attention, sp.id);
    st.attention_weight = attention_weight(attention, sp.id);
    st.expected_cost = st.attention_weight * st.perceptual_cost;
    st.compute = action.is_warp() ? warp_cost(sp, scenario.compute_model)
                                  : render_cost(sp, action.quality, scenario.compute_model);
    trace.expected_cost += st.expected_cost;
    trace.spend += st.compute;
    raw.push_back(st.perceptual_cost);

    if (!action.is_warp()) state.last_render[sp.id] = RenderRecord{sp.points_gold, t, action.quality};
    state.history.push(sp.id, st.perceptual_cost);
    trace.sprites.push_back(std::move(st));
  }
  trace.raw_cost = frame_cost(raw);
  trace.slack = trace.budget - trace.spend;
  if (trace.spend > trace.budget) {
    throw InfeasibleBudget("frame " + std::to_string(t) + ": plan spends " + std::to_string(trace.spend) +
                               " above the budget " + std::to_string(trace.budget),
                           static_cast<std::ptrdiff_t>(t));
  }
  return {std::move(state), std::move(trace)};
}

// Plans and applies one frame. Errors are tagged with the frame index.
inline std::pair<SimState, FrameTrace> step(SimState state, const Scenario& scenario, std::size_t t,
                                            const SimConfig& config) {
  std::vector<std::string> flags;
  const AttentionModel attention = build_attention(scenario, t, config, state.history, &flags);
  FramePlan plan;
  try {
    plan = plan_frame(frame_problem(scenario, t, state, config, attention), config.regulator);
  } catch (const InfeasibleBudget& e) {
    throw InfeasibleBudget("frame " + std::to_string(t) + ": " + e.what(), static_cast<std::ptrdiff_t>(t));
  }
  auto [next, trace] = run_frame(std::move(state), scenario, t, plan, attention, config);
  trace.flags = std::move(flags);
  return {std::move(next), std::move(trace)};
}

// Runs every frame. Frame 0 re-renders all sprites since nothing can be
// warped yet.
inline std::vector<FrameTrace> run_sequence(const Scenario& input, const SimConfig& config) {
  validate(config);
  const Scenario scenario = effective_scenario(input, config);
  SimState state = initial_state(config);
  std::vector<FrameTrace> traces;
  traces.reserve(scenario.frame_count());
  for (std::size_t t = 0; t < scenario.frame_count(); ++t) {
    auto [next, trace] = step(std::move(state), scenario, t, config);
    state = std::move(next);
    traces.push_back(std::move(trace));
  }
  return traces;
}

// ---------------------------------------------------------------------------
// CSV output. Numbers use 9 significant digits.

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline constexpr const char* kTraceCsvHeader =
    "kind,policy,frame,sprite,action,age,spatial_factor,texture_lod,geometry_lod,shading_level,"
    "geometric_warp_error,resolution_error,texture_error,geometry_error,shading_error,perceptual_cost,"
    "attention,attention_weight,expected_cost,compute,budget,slack,flags";

inline void write_trace_csv(std::ostream& out, const std::vector<FrameTrace>& traces) {
  out << kTraceCsvHeader << '\n';
  const auto f = format_number;
  for (const auto& tr : traces) {
    for (const auto& s : tr.sprites) {
      const bool warp = s.action.is_warp();
      const auto& q = s.action.quality;
      out << "sprite," << tr.policy << ',' << tr.frame << ',' << s.id << ',' << (warp ? "warp" : "render") << ','
          << s.age << ',';
      if (warp) {
        out << ",,,,";
      } else {
        out << f(q.spatial_factor) << ',' << q.texture_lod << ',' << q.geometry_lod << ',' << q.shading_level << ',';
      }
      const auto& fd = s.fiducial;
      out << f(fd.geometric_warp_error) << ',' << f(fd.resolution_error) << ',' << f(fd.texture_error) << ','
          << f(fd.geometry_error) << ',' << f(fd.shading_error) << ',' << f(s.perceptual_cost) << ','
          << f(s.attention) << ',' << f(s.attention_weight) << ',' << f(s.expected_cost) << ',' << f(s.compute)
          << ",,,\n";
    }
    std::string flags;
    for (const auto& fl : tr.flags) flags += (flags.empty() ? "" : ";") + fl;
    out << "frame," << tr.policy << ',' << tr.frame << ",,,,,,,,,,,,," << f(tr.raw_cost) << ",,,"
        << f(tr.expected_cost) << ',' << f(tr.spend) << ',' << f(tr.budget) << ',' << f(tr.slack) << ',' << flags
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Policy comparison

struct ComparisonRow {
  std::string label;
  std::string policy;
  std::size_t frames = 0;
  double mean_expected_cost = 0.0;
  double max_expected_cost = 0.0;
  double mean_raw_cost = 0.0;
  double mean_utilization = 0.0;
  std::size_t rerenders = 0;
  std::size_t warps = 0;
};

inline ComparisonRow summarize(const std::string& label, const std::vector<FrameTrace>& traces) {
  ComparisonRow row;
  row.label = label;
  row.frames = traces.size();
  for (const auto& tr : traces) {
    row.policy = tr.policy;
    row.mean_expected_cost += tr.expected_cost;
    row.max_expected_cost = std::max(row.max_expected_cost, tr.expected_cost);
    row.mean_raw_cost += tr.raw_cost;
    row.mean_utilization += tr.spend / tr.budget;
    for (const auto& s : tr.sprites) (s.action.is_warp() ? row.warps : row.rerenders)++;
  }
  if (!traces.empty()) {
    const auto n = static_cast<double>(traces.size());
    row.mean_expected_cost /= n;
    row.mean_raw_cost /= n;
    row.mean_utilization /= n;
  }
  return row;
}

// Runs each configuration on the scenario; runs are independent and execute
// concurrently. Rows come back in input order.
inline std::vector<ComparisonRow> compare_policies(const Scenario& scenario,
                                                   const std::vector<std::pair<std::string, SimConfig>>& configs) {
  if (configs.size() < 2) throw ValidationError("compare: at least two configurations are required");
  std::vector<std::future<std::vector<FrameTrace>>> runs;
  for (const auto& [label, cfg] : configs) {
    runs.push_back(std::async(std::launch::async, [&scenario, &cfg = cfg] { return run_sequence(scenario, cfg); }));
  }
  std::vector<ComparisonRow> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) rows.push_back(summarize(configs[i].first, runs[i].get()));
  return rows;
}

inline constexpr const char* kComparisonCsvHeader =
    "label,policy,frames,mean_expected_cost,max_expected_cost,mean_raw_cost,mean_budget_utilization,"
    "rerender_count,warp_count";

inline void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << kComparisonCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.label << ',' << r.policy << ',' << r.frames << ',' << format_number(r.mean_expected_cost) << ','
        << format_number(r.max_expected_cost) << ',' << format_number(r.mean_raw_cost) << ','
        << format_number(r.mean_utilization) << ',' << r.rerenders << ',' << r.warps << '\n';
  }
}

}  // namespace spritereg
