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

// Command-line driver: simulate, generate, compare, oracle.
//
// Exit codes: 0 success, 2 validation error, 3 infeasible budget.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spritereg/spritereg.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw spritereg::ValidationError("cannot write '" + path + "'");
  return out;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct WeightFlags {
  std::optional<double> w_geo, w_res, w_tex, w_geom_lod, w_shade, alpha;

  void add(CLI::App* cmd) {
    cmd->add_option("--w-geo", w_geo, "Weight of geometric warp error (per pixel^2)");
    cmd->add_option("--w-res", w_res, "Weight of resolution error");
    cmd->add_option("--w-tex", w_tex, "Weight of texture error");
    cmd->add_option("--w-geom-lod", w_geom_lod, "Weight of geometry LOD error");
    cmd->add_option("--w-shade", w_shade, "Weight of shading error");
    cmd->add_option("--alpha", alpha, "Attention factor for unattended sprites, in [0,1]");
  }

  void apply(spritereg::SimConfig& c) const {
    if (w_geo) c.cost_model.w_geo = *w_geo;
    if (w_res) c.cost_model.w_res = *w_res;
    if (w_tex) c.cost_model.w_tex = *w_tex;
    if (w_geom_lod) c.cost_model.w_geom_lod = *w_geom_lod;
    if (w_shade) c.cost_model.w_shade = *w_shade;
    if (alpha) c.attention.alpha = *alpha;
    spritereg::validate(c);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spritereg: expected-cost regulation of sprite rendering under a frame budget"};
  app.require_subcommand(1);

  std::string scenario_path, config_path, policy, out_path;
  WeightFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write a per-frame trace CSV");
  simulate->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  simulate->add_option("--config", config_path, "Config JSON");
  simulate->add_option("--policy", policy, "greedy|sahni:k|multidim|render-all|warp-all|oracle");
  simulate->add_option("--out", out_path, "Trace CSV (stdout if omitted)");
  sim_flags.add(simulate);

  std::string spec_path;
  std::uint64_t seed = 0;
  bool demo = false;
  std::size_t demo_frames = 60;
  auto* generate = app.add_subcommand("generate", "Write a synthetic or demo scenario");
  generate->add_option("--spec", spec_path, "Generator spec JSON (built-in defaults if omitted)");
  generate->add_option("--seed", seed, "Generator seed");
  generate->add_flag("--demo", demo, "Write the spacecraft demo scenario instead");
  generate->add_option("--frames", demo_frames, "Frame count of the demo scenario");
  generate->add_option("--out", out_path, "Scenario JSON")->required();

  std::string config_list;
  WeightFlags cmp_flags;
  auto* compare = app.add_subcommand("compare", "Compare configurations on one scenario");
  compare->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  compare->add_option("--configs", config_list, "Comma-separated config JSON files")->required();
  compare->add_option("--out", out_path, "Comparison CSV (stdout if omitted)");
  cmp_flags.add(compare);

  std::size_t frame = 0;
  auto* oracle = app.add_subcommand("oracle", "Exact knapsack for one frame, next to greedy and sahni:2");
  oracle->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  oracle->add_option("--frame", frame, "Frame index")->required();
  oracle->add_option("--config", config_path, "Config JSON (its policy drives frames before --frame)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    using namespace spritereg;
    if (*simulate) {
      const Scenario sc = load_scenario(scenario_path);
      SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
      if (!policy.empty()) cfg.regulator.policy = Policy::parse(policy);
      sim_flags.apply(cfg);
      const auto traces = run_sequence(sc, cfg);
      if (out_path.empty()) {
        write_trace_csv(std::cout, traces);
      } else {
        auto out = open_output(out_path);
        write_trace_csv(out, traces);
      }
    } else if (*generate) {
      Scenario sc;
      if (demo) {
        sc = spacecraft_demo(demo_frames);
      } else {
        GeneratorSpec spec;
        if (!spec_path.empty()) {
          std::ifstream in(spec_path);
          if (!in) throw ValidationError("cannot open generator spec '" + spec_path + "'");
          nlohmann::json j;
          try {
            j = nlohmann::json::parse(in);
          } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError(std::string("generator spec parse error: ") + e.what());
          }
          spec = generator_spec_from_json(j);
        }
        sc = generate_synthetic(spec, seed);
      }
      save_scenario(sc, out_path);
    } else if (*compare) {
      const Scenario sc = load_scenario(scenario_path);
      std::vector<std::pair<std::string, SimConfig>> configs;
      for (const auto& path : split_list(config_list)) {
        SimConfig cfg = load_config(path);
        cmp_flags.apply(cfg);
        configs.emplace_back(std::filesystem::path(path).stem().string(), std::move(cfg));
      }
      const auto rows = compare_policies(sc, configs);
      if (out_path.empty()) {
        write_comparison_csv(std::cout, rows);
      } else {
        auto out = open_output(out_path);
        write_comparison_csv(out, rows);
      }
    } else if (*oracle) {
      const Scenario input = load_scenario(scenario_path);
      const SimConfig cfg = config_path.empty() ? SimConfig{} : load_config(config_path);
      const Scenario sc = effective_scenario(input, cfg);
      if (frame >= sc.frame_count()) throw ValidationError("oracle: --frame is past the last frame");
      SimState state = initial_state(cfg);
      for (std::size_t t = 0; t < frame; ++t) state = step(std::move(state), sc, t, cfg).first;
      const AttentionModel attention = build_attention(sc, frame, cfg, state.history);
      const FrameProblem problem = frame_problem(sc, frame, state, cfg, attention);
      const KnapsackInstance inst = knapsack_instance(problem);
      auto describe = [&](const KnapsackSelection& s) {
        nlohmann::json chosen = nlohmann::json::array();
        for (std::size_t i : s.chosen) chosen.push_back(inst.items[i].id);
        return nlohmann::json{{"benefit", s.benefit}, {"compute", s.cost}, {"rerender", chosen}, {"branch", s.branch}};
      };
      nlohmann::json candidates = nlohmann::json::array();
      for (const auto& it : inst.items) {
        candidates.push_back({{"sprite", it.id}, {"benefit", it.benefit}, {"compute", it.cost}, {"rate", it.rate()}});
      }
      const nlohmann::json report{{"frame", frame},
                                  {"residual_budget", inst.residual},
                                  {"candidates", candidates},
                                  {"oracle", describe(exact_knapsack_oracle(inst.items, inst.residual))},
                                  {"greedy", describe(greedy_knapsack(inst.items, inst.residual))},
                                  {"sahni:2", describe(sahni_knapsack(inst.items, inst.residual, 2))}};
      std::cout << report.dump(2) << '\n';
    }
  } catch (const spritereg::InfeasibleBudget& e) {
    std::cerr << "infeasible budget: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const spritereg::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
