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

// Probability models over where a viewer's attention rests, and the expected
// perceptual cost of a frame under each of them.
//
//   binary       sum_i  p_i C_i + (1 - p_i) alpha C_i
//   continuous   sum_i  integral_0^1 p_i(x) alpha(x) C_i dx
//   object       sum_ij q_ij C_ij + (1 - q_ij) alpha C_ij,
//                q_ij = p(sprite i | object j) p(object j)
//
// Every family is linear in the sprite costs, so each reduces to a per-sprite
// attention weight w_i with expected cost sum_i w_i C_i.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "spritereg/error.hpp"
#include "spritereg/perceptual_cost.hpp"
#include "spritereg/scenario.hpp"
#include "spritereg/scene.hpp"

namespace spritereg {

using CostMap = std::map<std::string, double>;

inline constexpr double kProbabilityTolerance = 1e-9;

struct BinaryAttention {
  std::map<std::string, double> probability;
  double alpha = 0.0;
};

// Attenuation alpha(x): monotone nondecreasing map [0,1] -> [0,1].
using Attenuation = std::function<double(double)>;

struct ContinuousAttention {
  std::size_t bins = 16;
  // Piecewise-constant density per sprite; bin k covers [k/bins, (k+1)/bins).
  std::map<std::string, std::vector<double>> density;
  Attenuation attenuation = [](double x) { return x; };
};

struct SpriteMembership {
  std::string object_id;
  double probability_given_object = 0.0;
};

struct ObjectAttention {
  std::map<std::string, double> object_probability;
  std::map<std::string, SpriteMembership> sprites;
  double alpha = 0.0;
};

using AttentionModel = std::variant<BinaryAttention, ContinuousAttention, ObjectAttention>;

namespace detail {

inline void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(what + ": probability outside [0,1]");
}

inline void check_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("attention: alpha outside [0,1]");
}

// Midpoint samples of alpha(x) over [0,1], spread evenly across the bins.
inline constexpr std::size_t kMidpointSamples = 65536;

inline std::vector<double> bin_attenuation_integrals(const ContinuousAttention& m) {
  std::vector<double> out(m.bins, 0.0);
  const double width = 1.0 / static_cast<double>(m.bins);
  const std::size_t per_bin = std::max<std::size_t>(64, (kMidpointSamples + m.bins - 1) / m.bins);
  const double h = width / static_cast<double>(per_bin);
  for (std::size_t k = 0; k < m.bins; ++k) {
    double acc = 0.0;
    const double lo = static_cast<double>(k) * width;
    for (std::size_t s = 0; s < per_bin; ++s) acc += m.attenuation(lo + (static_cast<double>(s) + 0.5) * h);
    out[k] = acc * h;
  }
  return out;
}

inline double continuous_weight(const std::vector<double>& density, const std::vector<double>& integrals) {
  double w = 0.0;
  for (std::size_t k = 0; k < density.size(); ++k) w += density[k] * integrals[k];
  return w;
}

}  // namespace detail

inline void validate(const BinaryAttention& m) {
  detail::check_alpha(m.alpha);
  for (const auto& [id, p] : m.probability) detail::check_probability(p, "sprite '" + id + "'");
}

inline void validate(const ContinuousAttention& m) {
  if (m.bins == 0) throw ValidationError("continuous attention: bin count must be >= 1");
  if (!m.attenuation) throw ValidationError("continuous attention: missing attenuation function");
  // Sampled check only; the attenuation is an arbitrary callable.
  double previous = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double a = m.attenuation(i / 256.0);
    if (!(a >= 0.0 && a <= 1.0)) throw ValidationError("continuous attention: attenuation outside [0,1]");
    if (a < previous) throw ValidationError("continuous attention: attenuation must be nondecreasing");
    previous = a;
  }
  for (const auto& [id, d] : m.density) {
    if (d.size() != m.bins) {
      throw ValidationError("continuous attention: sprite '" + id + "' density has wrong bin count");
    }
    double mass = 0.0;
    for (double v : d) {
      if (!std::isfinite(v) || v < 0.0) {
        throw ValidationError("continuous attention: sprite '" + id + "' density must be >= 0");
      }
      mass += v;
    }
    mass /= static_cast<double>(m.bins);
    if (std::abs(mass - 1.0) > kProbabilityTolerance) {
      throw ValidationError("continuous attention: sprite '" + id + "' density not normalized");
    }
  }
}

inline void validate(const ObjectAttention& m) {
  detail::check_alpha(m.alpha);
  for (const auto& [id, p] : m.object_probability) detail::check_probability(p, "object '" + id + "'");
  std::map<std::string, double> totals;
  for (const auto& [id, member] : m.sprites) {
    detail::check_probability(member.probability_given_object, "sprite '" + id + "'");
    if (!m.object_probability.count(member.object_id)) {
      throw ValidationError("object attention: sprite '" + id + "' belongs to object '" + member.object_id +
                            "' with no probability");
    }
    totals[member.object_id] += member.probability_given_object;
  }
  for (const auto& [obj, total] : totals) {
    if (total > 1.0 + kProbabilityTolerance) {
      throw ValidationError("object attention: conditionals of object '" + obj + "' sum above 1");
    }
  }
}

inline void validate(const AttentionModel& m) {
  std::visit([](const auto& v) { validate(v); }, m);
}

// ---------------------------------------------------------------------------
// Expected cost, one function per family.

inline double expected_cost_binary(const CostMap& costs, const BinaryAttention& m) {
  validate(m);
  double total = 0.0;
  for (const auto& [id, c] : costs) {
    auto it = m.probability.find(id);
    if (it == m.probability.end()) {
      throw ValidationError("binary attention: no probability for costed sprite '" + id + "'");
    }
    const double p = it->second;
    total += p * c + (1.0 - p) * m.alpha * c;
  }
  return total;
}

inline double expected_cost_continuous(const CostMap& costs, const ContinuousAttention& m) {
  validate(m);
  const auto integrals = detail::bin_attenuation_integrals(m);
  double total = 0.0;
  for (const auto& [id, c] : costs) {
    auto it = m.density.find(id);
    if (it == m.density.end()) {
      throw ValidationError("continuous attention: no density for costed sprite '" + id + "'");
    }
    total += detail::continuous_weight(it->second, integrals) * c;
  }
  return total;
}

inline double expected_cost_object(const CostMap& costs, const ObjectAttention& m) {
  validate(m);
  double total = 0.0;
  for (const auto& [id, c] : costs) {
    auto it = m.sprites.find(id);
    if (it == m.sprites.end()) {
      throw ValidationError("object attention: orphan sprite '" + id + "'");
    }
    auto obj = m.object_probability.find(it->second.object_id);
    if (obj == m.object_probability.end()) {
      throw ValidationError("object attention: orphan sprite '" + id + "' (no object probability)");
    }
    const double q = it->second.probability_given_object * obj->second;
    total += q * c + (1.0 - q) * m.alpha * c;
  }
  return total;
}

inline double expected_cost(const CostMap& costs, const AttentionModel& m) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BinaryAttention>) {
          return expected_cost_binary(costs, v);
        } else if constexpr (std::is_same_v<T, ContinuousAttention>) {
          return expected_cost_continuous(costs, v);
        } else {
          return expected_cost_object(costs, v);
        }
      },
      m);
}

// ---------------------------------------------------------------------------
// Per-sprite views.

// Probability that attention rests on the sprite. For the continuous family
// this is the mean attention level, integral of x p(x) dx.
inline double attention_probability(const AttentionModel& m, const std::string& sprite_id) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, BinaryAttention>) {
          auto it = v.probability.find(sprite_id);
          if (it == v.probability.end()) throw ValidationError("no attention probability for '" + sprite_id + "'");
          return it->second;
        } else if constexpr (std::is_same_v<T, ContinuousAttention>) {
          auto it = v.density.find(sprite_id);
          if (it == v.density.end()) throw ValidationError("no attention density for '" + sprite_id + "'");
          const double width = 1.0 / static_cast<double>(v.bins);
          double mean = 0.0;
          for (std::size_t k = 0; k < v.bins; ++k) mean += it->second[k] * width * (k + 0.5) * width;
          return mean;
        } else {
          auto it = v.sprites.find(sprite_id);
          if (it == v.sprites.end()) throw ValidationError("object attention: orphan sprite '" + sprite_id + "'");
          return it->second.probability_given_object * v.object_probability.at(it->second.object_id);
        }
      },
      m);
}

// Multiplier w such that the sprite contributes w * C to the expected cost.
inline double attention_weight(const AttentionModel& m, const std::string& sprite_id) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ContinuousAttention>) {
          auto it = v.density.find(sprite_id);
          if (it == v.density.end()) throw ValidationError("no attention density for '" + sprite_id + "'");
          return detail::continuous_weight(it->second, detail::bin_attenuation_integrals(v));
        } else {
          const double p = attention_probability(m, sprite_id);
          return p + (1.0 - p) * v.alpha;
        }
      },
      m);
}

// Binary model with p_i = q_ij; gives the same expected cost for every cost map.
inline BinaryAttention flatten(const ObjectAttention& m) {
  BinaryAttention out;
  out.alpha = m.alpha;
  for (const auto& [id, member] : m.sprites) {
    out.probability[id] = member.probability_given_object * m.object_probability.at(member.object_id);
  }
  return out;
}

// Continuous model placing probability p_i of full attention uniformly in the
// top bin and the rest uniformly in the bottom bin.
inline ContinuousAttention two_level_density(const std::map<std::string, double>& probability, std::size_t bins,
                                             Attenuation attenuation) {
  if (bins < 2) throw ValidationError("two-level density needs at least 2 bins");
  ContinuousAttention out;
  out.bins = bins;
  out.attenuation = std::move(attenuation);
  const auto k = static_cast<double>(bins);
  for (const auto& [id, p] : probability) {
    std::vector<double> d(bins, 0.0);
    d.front() = k * (1.0 - p);
    d.back() = k * p;
    out.density[id] = std::move(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Authoring from object groups.

struct GroupPriorSpec {
  // Indexed by Group: primary actor, secondary actor, critical environment,
  // background environment.
  std::array<double, 4> priors{0.6, 0.25, 0.1, 0.05};
  double area_exponent = 1.0;
  double edge_bonus = 0.5;
};

inline void validate(const GroupPriorSpec& s) {
  double sum = 0.0;
  for (double p : s.priors) {
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("group priors must be >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) throw ValidationError("group priors must sum to 1");
  if (!(s.area_exponent > 0.0) || !std::isfinite(s.area_exponent)) {
    throw ValidationError("group area exponent must be > 0");
  }
  if (!(s.edge_bonus >= 0.0) || !std::isfinite(s.edge_bonus)) throw ValidationError("edge bonus must be >= 0");
}

// Object probability = group prior split among the group's objects in
// proportion to (object area)^area_exponent. Groups with no visible area give
// up their mass, which is redistributed so the object probabilities sum to 1.
// Within an object, sprites are weighted by area * (1 + edge_bonus * is_edge).
inline ObjectAttention attention_from_groups(const std::vector<SceneObject>& objects, const FrameState& frame,
                                             const GroupPriorSpec& spec, double alpha = 0.0) {
  if (objects.empty()) throw ValidationError("attention_from_groups: empty object set");
  validate(spec);
  detail::check_alpha(alpha);

  auto area_of = [&](const std::string& sid) {
    auto it = frame.find(sid);
    if (it == frame.end()) throw ValidationError("attention_from_groups: sprite '" + sid + "' missing from frame");
    return it->second.area_fraction;
  };

  std::vector<double> salience(objects.size(), 0.0);
  std::array<double, 4> group_total{};
  for (std::size_t j = 0; j < objects.size(); ++j) {
    double area = 0.0;
    for (const auto& sid : objects[j].sprite_ids) area += area_of(sid);
    salience[j] = area > 0.0 ? std::pow(area, spec.area_exponent) : 0.0;
    group_total[static_cast<std::size_t>(objects[j].group)] += salience[j];
  }

  ObjectAttention out;
  out.alpha = alpha;
  std::vector<double> raw(objects.size(), 0.0);
  double total = 0.0;
  for (std::size_t j = 0; j < objects.size(); ++j) {
    const auto g = static_cast<std::size_t>(objects[j].group);
    if (group_total[g] > 0.0) raw[j] = spec.priors[g] * salience[j] / group_total[g];
    total += raw[j];
  }
  for (std::size_t j = 0; j < objects.size(); ++j) {
    out.object_probability[objects[j].id] = total > 0.0 ? raw[j] / total : 0.0;
  }

  for (const auto& obj : objects) {
    std::vector<double> w;
    double sum = 0.0;
    for (const auto& sid : obj.sprite_ids) {
      const bool edge =
          std::find(obj.edge_sprite_ids.begin(), obj.edge_sprite_ids.end(), sid) != obj.edge_sprite_ids.end();
      w.push_back(area_of(sid) * (1.0 + (edge ? spec.edge_bonus : 0.0)));
      sum += w.back();
    }
    for (std::size_t i = 0; i < obj.sprite_ids.size(); ++i) {
      const double p = sum > 0.0 ? w[i] / sum : 1.0 / static_cast<double>(obj.sprite_ids.size());
      out.sprites[obj.sprite_ids[i]] = SpriteMembership{obj.id, p};
    }
  }
  return out;
}

// Shifts attention within each object toward sprites whose recent errors
// persist: conditionals are scaled by (1 + beta * persistence) and
// renormalized to the object's original conditional mass.
inline ObjectAttention condition_on_cost(const ObjectAttention& model, const CostHistory& history, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("condition_on_cost: beta must be >= 0");
  if (beta == 0.0) return model;
  std::map<std::string, double> before;
  std::map<std::string, double> after;
  ObjectAttention out = model;
  for (auto& [id, member] : out.sprites) {
    before[member.object_id] += member.probability_given_object;
    member.probability_given_object *= 1.0 + beta * history.persistence(id);
    after[member.object_id] += member.probability_given_object;
  }
  for (auto& [id, member] : out.sprites) {
    const double a = after[member.object_id];
    member.probability_given_object = a > 0.0 ? member.probability_given_object * before[member.object_id] / a : 0.0;
  }
  return out;
}

}  // namespace spritereg
