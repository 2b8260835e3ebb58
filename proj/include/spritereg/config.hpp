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

// Simulation configuration and its JSON form. Sections: cost_model,
// attention, compute_model, regulator; every key is optional.

#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "spritereg/attention.hpp"
#include "spritereg/fiducial.hpp"
#include "spritereg/perceptual_cost.hpp"
#include "spritereg/regulator.hpp"
#include "spritereg/scenario.hpp"

namespace spritereg {

enum class AttentionKind { kBinary, kContinuous, kObject };

struct AttentionConfig {
  AttentionKind kind = AttentionKind::kObject;
  double alpha = 0.0;
  double beta = 0.0;    // cost-conditioning gain
  double lambda = 1.0;  // persistence combiner rate
  std::size_t window = 8;
  GroupPriorSpec groups;
  std::size_t bins = 16;
  // alpha(x) for the continuous family: "linear" x, "power" x^param,
  // "floor" param + (1 - param) x.
  std::string attenuation = "linear";
  double attenuation_param = 1.0;
  // Binary/continuous probabilities: explicit per sprite, else per object
  // group, else derived from the group-authored object model.
  std::map<std::string, double> sprite_probabilities;
  std::map<Group, double> group_probabilities;
};

struct SimConfig {
  CostModel cost_model;
  QualityErrorModel error_forms;
  AttentionConfig attention;
  nlohmann::json compute_model_overrides = nlohmann::json::object();
  RegulatorConfig regulator;
};

inline Attenuation make_attenuation(const AttentionConfig& a) {
  const double param = a.attenuation_param;
  if (a.attenuation == "linear") return [](double x) { return x; };
  if (a.attenuation == "power") {
    if (!(param > 0.0)) throw ValidationError("attention: power attenuation needs attenuation_param > 0");
    return [param](double x) { return std::pow(x, param); };
  }
  if (a.attenuation == "floor") {
    if (!(param >= 0.0 && param <= 1.0)) throw ValidationError("attention: floor attenuation needs param in [0,1]");
    return [param](double x) { return param + (1.0 - param) * x; };
  }
  throw ValidationError("attention: unknown attenuation '" + a.attenuation + "'");
}

inline void validate(const SimConfig& c) {
  validate(c.cost_model);
  validate(c.error_forms);
  validate(c.attention.groups);
  validate(c.regulator);
  if (!(c.attention.alpha >= 0.0 && c.attention.alpha <= 1.0)) throw ValidationError("attention: alpha outside [0,1]");
  if (!(c.attention.beta >= 0.0)) throw ValidationError("attention: beta must be >= 0");
  if (c.attention.bins < 2 && c.attention.kind == AttentionKind::kContinuous) {
    throw ValidationError("attention: continuous model needs at least 2 bins");
  }
  (void)CostHistory(c.attention.window, c.attention.lambda);
  (void)make_attenuation(c.attention);
  for (const auto& [id, p] : c.attention.sprite_probabilities) detail::check_probability(p, "sprite '" + id + "'");
  for (const auto& [g, p] : c.attention.group_probabilities) detail::check_probability(p, std::string(to_string(g)));
}

inline SimConfig config_from_json(const nlohmann::json& j) {
  using detail::get_as;
  using detail::require_keys;
  SimConfig c;
  require_keys(j, {}, {"cost_model", "attention", "compute_model", "regulator"}, "config");

  if (j.contains("cost_model")) {
    const auto& jc = j.at("cost_model");
    const std::string where = "cost_model";
    require_keys(jc, {},
                 {"w_geo", "w_res", "w_tex", "w_geom_lod", "w_shade", "resolution_exponent", "texture_base",
                  "shading_exponent"},
                 where);
    auto num = [&](const char* key, double& field) {
      if (jc.contains(key)) field = get_as<double>(jc, key, where);
    };
    num("w_geo", c.cost_model.w_geo);
    num("w_res", c.cost_model.w_res);
    num("w_tex", c.cost_model.w_tex);
    num("w_geom_lod", c.cost_model.w_geom_lod);
    num("w_shade", c.cost_model.w_shade);
    num("resolution_exponent", c.error_forms.resolution_exponent);
    num("texture_base", c.error_forms.texture_base);
    num("shading_exponent", c.error_forms.shading_exponent);
  }

  if (j.contains("attention")) {
    const auto& ja = j.at("attention");
    const std::string where = "attention";
    require_keys(ja, {},
                 {"model", "alpha", "beta", "lambda", "window", "bins", "attenuation", "attenuation_param",
                  "group_priors", "area_exponent", "edge_bonus", "group_probabilities", "sprite_probabilities"},
                 where);
    auto& a = c.attention;
    if (ja.contains("model")) {
      const auto m = get_as<std::string>(ja, "model", where);
      if (m == "binary") {
        a.kind = AttentionKind::kBinary;
      } else if (m == "continuous") {
        a.kind = AttentionKind::kContinuous;
      } else if (m == "object") {
        a.kind = AttentionKind::kObject;
      } else {
        throw ValidationError("attention: model must be binary|continuous|object");
      }
    }
    if (ja.contains("alpha")) a.alpha = get_as<double>(ja, "alpha", where);
    if (ja.contains("beta")) a.beta = get_as<double>(ja, "beta", where);
    if (ja.contains("lambda")) a.lambda = get_as<double>(ja, "lambda", where);
    if (ja.contains("window")) a.window = get_as<std::size_t>(ja, "window", where);
    if (ja.contains("bins")) a.bins = get_as<std::size_t>(ja, "bins", where);
    if (ja.contains("attenuation")) a.attenuation = get_as<std::string>(ja, "attenuation", where);
    if (ja.contains("attenuation_param")) a.attenuation_param = get_as<double>(ja, "attenuation_param", where);
    if (ja.contains("area_exponent")) a.groups.area_exponent = get_as<double>(ja, "area_exponent", where);
    if (ja.contains("edge_bonus")) a.groups.edge_bonus = get_as<double>(ja, "edge_bonus", where);
    if (ja.contains("group_priors")) {
      const auto& jp = ja.at("group_priors");
      require_keys(jp, {}, {"primary_actor", "secondary_actor", "critical_environment", "background_environment"},
                   "attention.group_priors");
      for (Group g : kAllGroups) {
        const std::string name(to_string(g));
        if (jp.contains(name)) a.groups.priors[static_cast<std::size_t>(g)] = get_as<double>(jp, name.c_str(), where);
      }
    }
    if (ja.contains("group_probabilities")) {
      const auto& jp = ja.at("group_probabilities");
      require_keys(jp, {}, {"primary_actor", "secondary_actor", "critical_environment", "background_environment"},
                   "attention.group_probabilities");
      for (Group g : kAllGroups) {
        const std::string name(to_string(g));
        if (jp.contains(name)) a.group_probabilities[g] = get_as<double>(jp, name.c_str(), where);
      }
    }
    if (ja.contains("sprite_probabilities")) {
      const auto& jp = ja.at("sprite_probabilities");
      if (!jp.is_object()) throw ValidationError("attention.sprite_probabilities must be an object");
      for (const auto& item : jp.items()) {
        if (!item.value().is_number()) throw ValidationError("attention.sprite_probabilities values must be numbers");
        a.sprite_probabilities[item.key()] = item.value().get<double>();
      }
    }
  }

  if (j.contains("compute_model")) {
    c.compute_model_overrides = j.at("compute_model");
    (void)compute_model_from_json(c.compute_model_overrides);
  }

  if (j.contains("regulator")) {
    const auto& jr = j.at("regulator");
    const std::string where = "regulator";
    require_keys(jr, {}, {"policy", "multidim_base", "spatial_step", "min_spatial_factor"}, where);
    if (jr.contains("policy")) c.regulator.policy = Policy::parse(get_as<std::string>(jr, "policy", where));
    if (jr.contains("multidim_base")) {
      c.regulator.multidim_base = Policy::parse(get_as<std::string>(jr, "multidim_base", where));
    }
    if (jr.contains("spatial_step")) c.regulator.spatial_step = get_as<double>(jr, "spatial_step", where);
    if (jr.contains("min_spatial_factor")) {
      c.regulator.min_spatial_factor = get_as<double>(jr, "min_spatial_factor", where);
    }
  }

  validate(c);
  return c;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

}  // namespace spritereg
