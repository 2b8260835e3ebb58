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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances and time limits are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "spritereg/spritereg.hpp"
#include "test_support.hpp"

namespace {

using namespace spritereg;
using testing::TestRng;

constexpr double kFormulaTolerance = 1e-9;
constexpr double kContinuousTolerance = 1e-6;  // relative, vs the Riemann oracle
constexpr double kReductionTolerance = 1e-12;  // relative; identities up to rounding
constexpr double kAffineTolerance = 1e-9;
constexpr double kNonAffineTolerance = 1e-6;  // relative, vs the grid-search oracle

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

// Every trace produced by the suite, for the budget-safety criterion.
std::vector<std::vector<FrameTrace>> g_traces;

std::string csv(const std::vector<FrameTrace>& traces) {
  std::ostringstream out;
  write_trace_csv(out, traces);
  return out.str();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(std::abs(b), 1e-300); }

// --- 1 ---------------------------------------------------------------------

Outcome equation_conformance() {
  Outcome o;
  // Binary, mixed attention.
  const BinaryAttention b{{{"s", 0.6}}, 0.5};
  o.require(close(expected_cost_binary({{"s", 10}}, b), 8.0, kFormulaTolerance), "binary substitution");
  // Raw sum and attended-only forms.
  const CostMap costs{{"a", 3.0}, {"b", 4.0}, {"c", 0.5}};
  const BinaryAttention b3{{{"a", 0.2}, {"b", 0.5}, {"c", 1.0}}, 1.0};
  o.require(close(expected_cost_binary(costs, b3), 7.5, kFormulaTolerance), "alpha=1 raw sum");
  BinaryAttention b0 = b3;
  b0.alpha = 0.0;
  o.require(close(expected_cost_binary(costs, b0), 0.6 + 2.0 + 0.5, kFormulaTolerance), "alpha=0 attended sum");
  // Object-conditioned.
  ObjectAttention m;
  m.object_probability = {{"o", 1.0}};
  m.sprites = {{"s", {"o", 1.0}}};
  o.require(close(expected_cost_object({{"s", 4.0}}, m), 4.0, kFormulaTolerance), "object certainty");
  m.object_probability = {{"o", 0.5}, {"p", 0.5}};
  m.sprites = {{"s", {"o", 0.4}}, {"t", {"o", 0.6}}, {"u", {"p", 1.0}}};
  o.require(close(expected_cost_object({{"s", 10.0}, {"t", 0.0}, {"u", 0.0}}, m), 2.0, kFormulaTolerance),
            "object substitution");

  // Continuous family against dense Riemann sums.
  auto single = [](std::vector<double> d, Attenuation a) {
    ContinuousAttention c;
    c.bins = d.size();
    c.density["s"] = std::move(d);
    c.attenuation = std::move(a);
    return c;
  };
  const auto uniform = single(std::vector<double>(16, 1.0), [](double x) { return x; });
  o.require(close_rel(expected_cost_continuous({{"s", 10}}, uniform), 5.0, kContinuousTolerance), "uniform density");

  const double k = 16;
  std::vector<double> top(16, 0.0);
  top.back() = k;
  const auto peaked = single(top, [k](double x) { return std::min(1.0, x * k / (k - 1)); });
  o.require(close_rel(expected_cost_continuous({{"s", 7}}, peaked), 7.0, kContinuousTolerance), "top-bin density");

  const std::vector<std::pair<std::vector<double>, Attenuation>> cases{
      {{0.6, 1.4}, [](double x) { return x * x; }},
      {{1.5, 0.5}, [](double x) { return std::sqrt(x); }},
      {{0.2, 0.3, 0.5, 3.0}, [](double x) { return 0.1 + 0.9 * x; }},
  };
  for (const auto& [d, a] : cases) {
    const double bins = static_cast<double>(d.size());
    const double oracle = 3.0 * testing::riemann([&, &d = d, &a = a](double x) {
      const auto bin = std::min(d.size() - 1, static_cast<std::size_t>(x * bins));
      return d[bin] * a(x);
    });
    const double got = expected_cost_continuous({{"s", 3.0}}, single(d, a));
    o.require(close_rel(got, oracle, kContinuousTolerance), "continuous vs Riemann: " + fmt("%.12g", got) + " vs " +
                                                                 fmt("%.12g", oracle));
  }
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome reductions() {
  Outcome o;
  TestRng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n_obj = rng.integer(1, 5);
    ObjectAttention obj;
    CostMap costs;
    double raw = 0.0;
    double obj_oracle = 0.0;
    double mass = 0.0;
    std::vector<double> p_obj;
    for (int j = 0; j < n_obj; ++j) mass += p_obj.emplace_back(rng.uniform(0.01, 1));
    for (int j = 0; j < n_obj; ++j) {
      const std::string oid = "o" + std::to_string(j);
      obj.object_probability[oid] = p_obj[static_cast<std::size_t>(j)] / mass;
      const int n_spr = rng.integer(1, 4);
      std::vector<double> w;
      double wsum = 0.0;
      for (int i = 0; i < n_spr; ++i) wsum += w.emplace_back(rng.uniform(0.01, 1));
      double inner = 0.0;
      for (int i = 0; i < n_spr; ++i) {
        const std::string sid = oid + "s" + std::to_string(i);
        const double cond = w[static_cast<std::size_t>(i)] / wsum;
        const double c = rng.uniform(0, 10);
        obj.sprites[sid] = {oid, cond};
        costs[sid] = c;
        raw += c;
        inner += cond * c;
      }
      obj_oracle += obj.object_probability[oid] * inner;
    }
    BinaryAttention bin;
    double attended = 0.0;
    for (const auto& [id, c] : costs) {
      bin.probability[id] = rng.uniform();
      attended += bin.probability[id] * c;
    }
    bin.alpha = 1.0;
    o.require(close_rel(expected_cost_binary(costs, bin), raw, kReductionTolerance), "alpha=1 is the raw sum");
    bin.alpha = 0.0;
    o.require(close_rel(expected_cost_binary(costs, bin), attended, kReductionTolerance), "alpha=0 attended sum");
    obj.alpha = 0.0;
    o.require(close_rel(expected_cost_object(costs, obj), obj_oracle, kReductionTolerance),
              "object form vs nested sum");
    obj.alpha = 1.0;
    o.require(close_rel(expected_cost_object(costs, obj), raw, kReductionTolerance), "object alpha=1 raw sum");
  }
  return o;
}

// --- 3 ---------------------------------------------------------------------

Outcome knapsack_gap() {
  Outcome o;
  TestRng rng(99);
  double gap_sum = 0.0;
  double worst_ratio = 1.0;
  double worst_sahni = 1.0;
  int instances = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto items = testing::random_items(rng, static_cast<std::size_t>(rng.integer(1, 18)));
    const double budget = rng.uniform(0, testing::total_cost(items));
    const double opt = testing::knapsack_enumerate(items, budget);
    const auto oracle = exact_knapsack_oracle(items, budget);
    const auto greedy = greedy_knapsack(items, budget);
    const auto sahni = sahni_knapsack(items, budget, 2);
    o.require(close(oracle.benefit, opt, 1e-9), "oracle disagrees with enumeration");
    o.require(greedy.cost <= budget && sahni.cost <= budget, "selection over budget");
    o.require(greedy.benefit >= 0.5 * opt, "factor-2 violated at trial " + std::to_string(trial));
    o.require(sahni.benefit >= greedy.benefit, "sahni:2 below greedy at trial " + std::to_string(trial));
    o.require(sahni.benefit >= 2.0 / 3.0 * opt - 1e-12, "sahni:2 below 2/3 OPT at trial " + std::to_string(trial));
    if (opt > 0.0) {
      gap_sum += 1.0 - greedy.benefit / opt;
      worst_ratio = std::min(worst_ratio, greedy.benefit / opt);
      worst_sahni = std::min(worst_sahni, sahni.benefit / opt);
      ++instances;
    }
  }
  if (o.pass) {
    o.detail = "mean greedy gap " + fmt("%.4f", gap_sum / instances) + ", worst greedy/OPT " +
               fmt("%.4f", worst_ratio) + ", worst sahni:2/OPT " + fmt("%.4f", worst_sahni);
  }
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome fiducial_correctness() {
  Outcome o;
  TestRng rng(4);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(rng.integer(3, 10));
    const PointSet src = testing::random_points(rng, n, 0, 1000);
    const double th = rng.uniform(0, 6.283185307179586);
    const double c = std::cos(th), s = std::sin(th);
    const double tx = rng.uniform(-200, 200), ty = rng.uniform(-200, 200);
    const double sh = rng.uniform(-1, 1);
    const std::vector<PointSet> moved{
        src,
        testing::transform(src, 1, 0, tx, 0, 1, ty),
        testing::transform(src, c, -s, tx, s, c, ty),
        testing::transform(src, 1, sh, tx, 0, 1, ty),
        testing::transform(src, rng.uniform(0.5, 2), rng.uniform(-1, 1), tx, rng.uniform(-1, 1), rng.uniform(0.5, 2), ty),
    };
    Sprite sprite;
    sprite.id = "s";
    sprite.last_render = RenderRecord{src, 0, {}};
    for (const auto& cur : moved) {
      const double e = warp_error(sprite, cur);
      worst = std::max(worst, e);
      o.require(e <= kAffineTolerance, "affine motion left residual " + fmt("%.3g", e));
    }
  }
  double worst_rel = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto n = static_cast<std::size_t>(rng.integer(4, 7));
    const PointSet src = testing::random_points(rng, n, -3, 3);
    PointSet dst = testing::transform(src, rng.uniform(0.5, 1.5), rng.uniform(-0.5, 0.5), rng.uniform(-2, 2),
                                      rng.uniform(-0.5, 0.5), rng.uniform(0.5, 1.5), rng.uniform(-2, 2));
    for (auto& p : dst) {
      p.x += rng.uniform(-0.4, 0.4);
      p.y += rng.uniform(-0.4, 0.4);
    }
    Sprite sprite;
    sprite.id = "s";
    sprite.last_render = RenderRecord{src, 0, {}};
    const double got = warp_error(sprite, dst);
    const double oracle = testing::brute_force_affine_residual(src, dst);
    worst_rel = std::max(worst_rel, std::abs(got - oracle) / oracle);
    o.require(close_rel(got, oracle, kNonAffineTolerance),
              "non-affine residual " + fmt("%.12g", got) + " vs oracle " + fmt("%.12g", oracle));
  }
  if (o.pass) o.detail = "worst affine residual " + fmt("%.3g", worst) + ", worst oracle gap " + fmt("%.3g", worst_rel);
  return o;
}

// --- 5 ---------------------------------------------------------------------

SimConfig sweep_config(double alpha) {
  SimConfig c;
  c.attention.kind = AttentionKind::kBinary;
  c.attention.alpha = alpha;
  c.attention.group_probabilities = {{Group::kPrimaryActor, 0.9},
                                     {Group::kSecondaryActor, 0.3},
                                     {Group::kCriticalEnvironment, 0.1},
                                     {Group::kBackgroundEnvironment, 0.02}};
  c.regulator.policy = Policy::parse("greedy");
  return c;
}

Outcome alpha_sweep() {
  Outcome o;
  const Scenario demo = load_scenario(SPRITEREG_DEMO_SCENARIO);
  auto background_rerenders = [&](const std::vector<FrameTrace>& traces) {
    int n = 0;
    for (const auto& tr : traces) {
      if (tr.frame == 0) continue;  // bootstrap frame renders everything
      for (const auto& s : tr.sprites) {
        const auto& owner = demo.object(demo.sprite(s.id).object_id);
        if (owner.group == Group::kBackgroundEnvironment && !s.action.is_warp()) ++n;
      }
    }
    return n;
  };
  auto mean_cost = [](const std::vector<FrameTrace>& traces) {
    double sum = 0.0;
    for (const auto& tr : traces) sum += tr.expected_cost;
    return sum / static_cast<double>(traces.size());
  };
  const auto low = run_sequence(demo, sweep_config(0.0));
  const auto high = run_sequence(demo, sweep_config(1.0));
  g_traces.push_back(low);
  g_traces.push_back(high);
  const int bg_low = background_rerenders(low);
  const int bg_high = background_rerenders(high);
  o.require(bg_low < bg_high, "background re-renders not reduced");
  o.require(mean_cost(low) < mean_cost(high), "mean expected cost not lower at alpha=0");
  o.detail = "background re-renders " + std::to_string(bg_low) + " (alpha=0) vs " + std::to_string(bg_high) +
             " (alpha=1); mean expected cost " + fmt("%.6g", mean_cost(low)) + " vs " + fmt("%.6g", mean_cost(high));
  return o;
}

// --- 6 ---------------------------------------------------------------------

Outcome budget_safety() {
  Outcome o;
  int frames = 0;
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    GeneratorSpec spec;
    spec.sprite_count = 6 + seed % 7;
    spec.frame_count = 8;
    spec.growth = 0.5 + static_cast<double>(seed % 4);
    spec.budget_scale = 1.0 + 0.1 * static_cast<double>(seed % 3);
    const Scenario sc = generate_synthetic(spec, seed);
    SimConfig cfg;
    cfg.regulator.policy = Policy::parse("multidim");
    cfg.regulator.multidim_base = Policy::parse(seed % 2 ? "greedy" : "sahni:1");
    cfg.attention.alpha = 0.25;
    SimState state = initial_state(cfg);
    std::vector<FrameTrace> traces;
    for (std::size_t t = 0; t < sc.frame_count(); ++t) {
      const auto attention = build_attention(sc, t, cfg, state.history);
      const FrameProblem p = frame_problem(sc, t, state, cfg, attention);
      RegulatorConfig base_cfg = cfg.regulator;
      base_cfg.policy = cfg.regulator.multidim_base;
      const FramePlan base = plan_frame(p, base_cfg);
      const FramePlan plan = multidim_greedy(p, cfg.regulator);
      o.require(plan.expected_cost <= base.expected_cost,
                "multidim worsened seed " + std::to_string(seed) + " frame " + std::to_string(t));
      o.require(plan.compute_spend <= p.budget && base.compute_spend <= p.budget, "plan over budget");
      improved += plan.expected_cost < base.expected_cost;
      ++frames;
      auto [next, trace] = run_frame(std::move(state), sc, t, plan, attention, cfg);
      state = std::move(next);
      traces.push_back(std::move(trace));
    }
    g_traces.push_back(std::move(traces));
  }
  std::size_t checked = 0;
  for (const auto& run : g_traces) {
    for (const auto& tr : run) {
      ++checked;
      o.require(tr.spend <= tr.budget, "trace frame " + std::to_string(tr.frame) + " over budget");
    }
  }
  if (o.pass) {
    o.detail = std::to_string(frames) + " multidim frames, " + std::to_string(improved) + " improved; " +
               std::to_string(checked) + " trace frames within budget";
  }
  return o;
}

// --- 7 ---------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  const Scenario demo = load_scenario(SPRITEREG_DEMO_SCENARIO);
  GeneratorSpec spec;
  spec.sprite_count = 12;
  spec.frame_count = 20;
  spec.growth = 1.5;
  const Scenario synthetic = generate_synthetic(spec, 77);
  o.require(generate_synthetic(spec, 77) == synthetic, "generator not deterministic");
  int runs = 0;
  for (const Scenario* sc : {&demo, &synthetic}) {
    for (const char* policy : {"greedy", "sahni:2", "multidim", "render-all", "warp-all"}) {
      for (double alpha : {0.0, 1.0}) {
        SimConfig cfg = sweep_config(alpha);
        cfg.regulator.policy = Policy::parse(policy);
        if (sc == &synthetic) cfg.attention.group_probabilities.clear();
        const auto first = run_sequence(*sc, cfg);
        const auto second = run_sequence(*sc, cfg);
        o.require(csv(first) == csv(second), std::string("trace differs for ") + policy);
        g_traces.push_back(first);
        ++runs;
      }
    }
  }
  std::ostringstream a, b;
  const std::vector<std::pair<std::string, SimConfig>> configs{{"a0", sweep_config(0)}, {"a1", sweep_config(1)}};
  write_comparison_csv(a, compare_policies(demo, configs));
  write_comparison_csv(b, compare_policies(demo, configs));
  o.require(a.str() == b.str(), "comparison table differs");
  if (o.pass) o.detail = std::to_string(runs) + " run pairs byte-identical";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "equation conformance", 1.0, equation_conformance},
      {2, "reductions", 5.0, reductions},
      {3, "knapsack optimality gap", 60.0, knapsack_gap},
      {4, "fiducial correctness", 5.0, fiducial_correctness},
      {5, "alpha sweep on demo scenario", 10.0, alpha_sweep},
      // 6 audits every trace collected so far, so it runs last.
      {7, "determinism", 60.0, determinism},
      {6, "budget safety and multidim dominance", 60.0, budget_safety},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.time_limit_s) {
      o.pass = false;
      o.detail += " (time limit " + fmt("%.0f", c.time_limit_s) + " s exceeded)";
    }
    std::printf("%s criterion %d: %s [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    all = all && o.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
