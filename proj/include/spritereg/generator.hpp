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

// Deterministic synthetic scenarios and the shipped "spacecraft" demo.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "spritereg/error.hpp"
#include "spritereg/scenario.hpp"
#include "spritereg/scene.hpp"

namespace spritereg {

enum class MotionClass { kStatic = 0, kTranslating = 1, kRotating = 2, kWobble = 3 };

inline constexpr double kScreenPixels = 1024.0 * 768.0;

struct GeneratorSpec {
  std::size_t sprite_count = 10;
  std::size_t frame_count = 20;
  std::size_t points_per_sprite = 4;
  std::size_t max_sprites_per_object = 3;
  // Relative weights of static, translating, rotating, wobble.
  std::array<double, 4> motion_weights{1.0, 1.0, 1.0, 1.0};
  // Relative weights of primary, secondary, critical, background groups.
  std::array<double, 4> group_weights{1.0, 1.0, 1.0, 1.0};
  double min_area = 0.01;
  double max_area = 0.12;
  // Screen footprint grows linearly to (1 + growth) times its initial size by
  // the last frame.
  double growth = 0.0;
  double speed = 2.0;           // pixels per frame
  double angular_speed = 0.02;  // radians per frame
  double wobble_amplitude = 3.0;
  // Budget as a multiple of the frame-0 cost of re-rendering everything,
  // never less than that (frame 0 must re-render all sprites).
  double budget_scale = 1.0;
  ComputeCostModel compute_model{1.0, 2e-4, 2e-5, 0.05, 1e-6, false};
};

namespace detail {

// Portable uniform draws over mt19937_64's standardized output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  template <std::size_t N>
  std::size_t categorical(const std::array<double, N>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform() * total;
    for (std::size_t i = 0; i < N; ++i) {
      if (u < weights[i]) return i;
      u -= weights[i];
    }
    return N - 1;
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string padded(const char* prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  return prefix + digits;
}

struct SpriteMotion {
  MotionClass motion = MotionClass::kStatic;
  PointSet base;
  Point2 velocity;
  double angular = 0.0;
  std::vector<Point2> wobble;  // per-point displacement direction * amplitude
  double area0 = 0.0;
};

inline PointSet points_at(const SpriteMotion& m, std::size_t t, std::size_t frame_count) {
  const double time = static_cast<double>(t);
  PointSet out = m.base;
  Point2 centroid;
  for (const auto& p : m.base) {
    centroid.x += p.x / static_cast<double>(m.base.size());
    centroid.y += p.y / static_cast<double>(m.base.size());
  }
  switch (m.motion) {
    case MotionClass::kStatic:
      break;
    case MotionClass::kTranslating:
      for (auto& p : out) {
        p.x += m.velocity.x * time;
        p.y += m.velocity.y * time;
      }
      break;
    case MotionClass::kRotating: {
      const double c = std::cos(m.angular * time);
      const double s = std::sin(m.angular * time);
      for (auto& p : out) {
        const double dx = p.x - centroid.x;
        const double dy = p.y - centroid.y;
        p.x = centroid.x + c * dx - s * dy + m.velocity.x * time;
        p.y = centroid.y + s * dx + c * dy + m.velocity.y * time;
      }
      break;
    }
    case MotionClass::kWobble: {
      // A quarter period spans the sequence, so the non-affine displacement
      // grows monotonically from frame 0 to the last frame.
      const double span = static_cast<double>(std::max<std::size_t>(frame_count, 2) - 1);
      const double phase = std::sin(0.5 * std::numbers::pi * time / span);
      for (std::size_t k = 0; k < out.size(); ++k) {
        out[k].x += m.velocity.x * time + phase * m.wobble[k].x;
        out[k].y += m.velocity.y * time + phase * m.wobble[k].y;
      }
      break;
    }
  }
  return out;
}

inline std::vector<LodLevel> lod_table(double error_scale) {
  // Full model of 6,795 vertices down to 97.
  static constexpr std::array<std::int64_t, 5> kPolygons{6795, 3398, 1699, 425, 97};
  static constexpr std::array<double, 5> kError{0.0, 0.04, 0.11, 0.3, 0.75};
  std::vector<LodLevel> out;
  for (std::size_t i = 0; i < kPolygons.size(); ++i) {
    out.push_back({static_cast<int>(i), kPolygons[i], kError[i] * error_scale});
  }
  return out;
}

// Sets the frame budget from the frame-0 render-all cost and the largest
// all-warp spend of any frame.
inline void fit_budget(Scenario& sc, double scale) {
  double render0 = 0.0;
  double max_warp = 0.0;
  for (std::size_t t = 0; t < sc.frames.size(); ++t) {
    double warp = 0.0;
    for (const auto& s : sc.sprites_at(t)) {
      if (t == 0) render0 += render_cost(s, QualityVector::finest(), sc.compute_model);
      warp += warp_cost(s, sc.compute_model);
    }
    max_warp = std::max(max_warp, warp);
  }
  sc.frame_budget = std::max(render0 * std::max(scale, 1.0), max_warp * 1.01);
}

}  // namespace detail

inline GeneratorSpec generator_spec_from_json(const nlohmann::json& j) {
  using detail::get_as;
  const std::string where = "generator spec";
  detail::require_keys(j, {},
                       {"sprite_count", "frame_count", "points_per_sprite", "max_sprites_per_object",
                        "motion_weights", "group_weights", "min_area", "max_area", "growth", "speed",
                        "angular_speed", "wobble_amplitude", "budget_scale", "compute_model"},
                       where);
  GeneratorSpec s;
  auto size = [&](const char* key, std::size_t& field) {
    if (!j.contains(key)) return;
    const auto v = get_as<std::int64_t>(j, key, where);
    if (v < 0) throw ValidationError(where + ": '" + key + "' must be >= 0");
    field = static_cast<std::size_t>(v);
  };
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = get_as<double>(j, key, where);
  };
  auto weights = [&](const char* key, std::array<double, 4>& field, std::initializer_list<const char*> names) {
    if (!j.contains(key)) return;
    const auto& jw = j.at(key);
    detail::require_keys(jw, {}, names, where + "." + key);
    std::size_t i = 0;
    for (const char* name : names) {
      field[i] = jw.contains(name) ? get_as<double>(jw, name, where) : 0.0;
      if (!(field[i] >= 0.0)) throw ValidationError(where + ": weights must be >= 0");
      ++i;
    }
  };
  size("sprite_count", s.sprite_count);
  size("frame_count", s.frame_count);
  size("points_per_sprite", s.points_per_sprite);
  size("max_sprites_per_object", s.max_sprites_per_object);
  weights("motion_weights", s.motion_weights, {"static", "translating", "rotating", "wobble"});
  weights("group_weights", s.group_weights,
          {"primary_actor", "secondary_actor", "critical_environment", "background_environment"});
  num("min_area", s.min_area);
  num("max_area", s.max_area);
  num("growth", s.growth);
  num("speed", s.speed);
  num("angular_speed", s.angular_speed);
  num("wobble_amplitude", s.wobble_amplitude);
  num("budget_scale", s.budget_scale);
  if (j.contains("compute_model")) s.compute_model = compute_model_from_json(j.at("compute_model"), s.compute_model);
  return s;
}

inline Scenario generate_synthetic(const GeneratorSpec& spec, std::uint64_t seed) {
  if (spec.sprite_count < 1) throw ValidationError("generate_synthetic: sprite_count must be >= 1");
  if (spec.frame_count < 1) throw ValidationError("generate_synthetic: frame_count must be >= 1");
  if (spec.points_per_sprite < kMinCharacteristicPoints) {
    throw ValidationError("generate_synthetic: points_per_sprite must be >= 3");
  }
  if (spec.max_sprites_per_object < 1) throw ValidationError("generate_synthetic: max_sprites_per_object must be >= 1");
  if (!(spec.min_area > 0.0 && spec.min_area <= spec.max_area && spec.max_area <= 1.0)) {
    throw ValidationError("generate_synthetic: need 0 < min_area <= max_area <= 1");
  }
  if (!(spec.growth >= 0.0)) throw ValidationError("generate_synthetic: growth must be >= 0");

  detail::Rng rng(seed);
  Scenario sc;
  sc.seed = seed;
  sc.compute_model = spec.compute_model;

  std::vector<detail::SpriteMotion> motion(spec.sprite_count);
  std::size_t next_sprite = 0;
  for (std::size_t obj = 0; next_sprite < spec.sprite_count; ++obj) {
    SceneObject o;
    o.id = detail::padded("o", obj, 3);
    o.group = kAllGroups[rng.categorical(spec.group_weights)];
    const std::size_t size =
        std::min(spec.sprite_count - next_sprite, 1 + rng.below(spec.max_sprites_per_object));
    for (std::size_t k = 0; k < size; ++k, ++next_sprite) {
      SpriteInfo s;
      s.id = detail::padded("s", next_sprite, 4);
      s.object_id = o.id;
      s.edge = rng.uniform() < 0.4;
      s.polygon_budget = detail::lod_table(rng.uniform(0.5, 2.0));
      s.max_texture_lod = 3;
      s.max_shading_level = 2;
      o.sprite_ids.push_back(s.id);
      if (s.edge) o.edge_sprite_ids.push_back(s.id);

      auto& m = motion[next_sprite];
      m.motion = static_cast<MotionClass>(rng.categorical(spec.motion_weights));
      const Point2 center{rng.uniform(150.0, 870.0), rng.uniform(150.0, 610.0)};
      const double radius = rng.uniform(20.0, 80.0);
      const double spin = rng.uniform(0.0, 2.0 * std::numbers::pi);
      for (std::size_t p = 0; p < spec.points_per_sprite; ++p) {
        const double theta = spin + 2.0 * std::numbers::pi * (static_cast<double>(p) + rng.uniform(-0.2, 0.2)) /
                                        static_cast<double>(spec.points_per_sprite);
        m.base.push_back({center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)});
        const double dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double amp = spec.wobble_amplitude * rng.uniform(0.5, 1.5);
        m.wobble.push_back({amp * std::cos(dir), amp * std::sin(dir)});
      }
      const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double speed = spec.speed * rng.uniform(0.5, 1.5);
      m.velocity = {speed * std::cos(heading), speed * std::sin(heading)};
      m.angular = spec.angular_speed * rng.uniform(-1.5, 1.5);
      m.area0 = rng.uniform(spec.min_area, spec.max_area);
      sc.sprites.push_back(std::move(s));
    }
    sc.objects.push_back(std::move(o));
  }

  for (std::size_t t = 0; t < spec.frame_count; ++t) {
    const double progress =
        spec.frame_count > 1 ? static_cast<double>(t) / static_cast<double>(spec.frame_count - 1) : 0.0;
    FrameState frame;
    for (std::size_t i = 0; i < spec.sprite_count; ++i) {
      SpriteFrame st;
      st.points = detail::points_at(motion[i], t, spec.frame_count);
      st.area_fraction = std::min(1.0, motion[i].area0 * (1.0 + spec.growth * progress));
      st.pixel_count = std::llround(st.area_fraction * kScreenPixels);
      frame.emplace(sc.sprites[i].id, std::move(st));
    }
    sc.frames.push_back(std::move(frame));
  }
  detail::fit_budget(sc, spec.budget_scale);
  validate(sc);
  return sc;
}

// Two spacecraft flying toward the viewer over mountainous terrain. The craft
// grow on screen as they approach, so later frames cannot re-render every
// layer within the budget that covered frame 0.
inline Scenario spacecraft_demo(std::size_t frame_count = 60) {
  if (frame_count < 2) throw ValidationError("spacecraft_demo: needs at least 2 frames");
  struct Layer {
    const char* sprite;
    const char* object;
    Group group;
    bool edge;
    Point2 center;
    double radius;
    Point2 velocity;
    double wobble;
    double area0;
    double growth;
    double lod_error;
  };
  // clang-format off
  static constexpr Layer kLayers[] = {
      {"craft_a_hull",     "craft_a",   Group::kPrimaryActor,          false, {400, 300}, 60,  {1.5, -0.5}, 8.0,  0.030, 3.0, 1.0},
      {"craft_a_wing",     "craft_a",   Group::kPrimaryActor,          true,  {440, 320}, 45,  {1.5, -0.5}, 10.0, 0.020, 3.0, 1.0},
      {"craft_b_hull",     "craft_b",   Group::kSecondaryActor,        false, {640, 260}, 40,  {-1.0, 0.3}, 8.0,  0.020, 2.0, 1.0},
      {"craft_b_fin",      "craft_b",   Group::kSecondaryActor,        true,  {660, 240}, 30,  {-1.0, 0.3}, 10.0, 0.012, 2.0, 1.0},
      {"ridge_near",       "ridge",     Group::kCriticalEnvironment,   true,  {500, 620}, 200, {-3.0, 0.0}, 16.0, 0.150, 1.0, 1.5},
      {"ridge_slope",      "ridge",     Group::kCriticalEnvironment,   false, {250, 660}, 150, {-3.0, 0.0}, 14.0, 0.100, 1.0, 1.5},
      {"mountains_far",    "backdrop",  Group::kBackgroundEnvironment, true,  {512, 450}, 300, {-1.0, 0.0}, 12.0, 0.250, 0.0, 0.5},
      {"sky",              "backdrop",  Group::kBackgroundEnvironment, false, {512, 150}, 350, {0.0, 0.0},  6.0,  0.300, 0.0, 0.5},
  };
  // clang-format on

  Scenario sc;
  sc.compute_model = ComputeCostModel{1.0, 2e-4, 1e-4, 0.05, 1e-6, false};
  std::vector<detail::SpriteMotion> motion;
  for (const auto& layer : kLayers) {
    auto obj = std::find_if(sc.objects.begin(), sc.objects.end(),
                            [&](const SceneObject& o) { return o.id == layer.object; });
    if (obj == sc.objects.end()) {
      sc.objects.push_back(SceneObject{layer.object, layer.group, {}, {}});
      obj = std::prev(sc.objects.end());
    }
    obj->sprite_ids.push_back(layer.sprite);
    if (layer.edge) obj->edge_sprite_ids.push_back(layer.sprite);

    SpriteInfo info;
    info.id = layer.sprite;
    info.object_id = layer.object;
    info.edge = layer.edge;
    info.polygon_budget = detail::lod_table(layer.lod_error);
    info.max_texture_lod = 3;
    info.max_shading_level = 2;
    sc.sprites.push_back(std::move(info));

    detail::SpriteMotion m;
    m.motion = MotionClass::kWobble;
    m.velocity = layer.velocity;
    m.area0 = layer.area0;
    for (int k = 0; k < 4; ++k) {
      const double theta = 0.5 * std::numbers::pi * k + 0.3;
      m.base.push_back({layer.center.x + layer.radius * std::cos(theta), layer.center.y + layer.radius * std::sin(theta)});
      // One corner moves radially and its neighbour tangentially, a
      // displacement no affine map of the square reproduces.
      const double amp = k == 0 ? layer.wobble : (k == 1 ? 0.5 * layer.wobble : 0.0);
      const double dir = theta + (k == 1 ? 0.5 * std::numbers::pi : 0.0);
      m.wobble.push_back({amp * std::cos(dir), amp * std::sin(dir)});
    }
    motion.push_back(std::move(m));
  }

  for (std::size_t t = 0; t < frame_count; ++t) {
    const double progress = static_cast<double>(t) / static_cast<double>(frame_count - 1);
    FrameState frame;
    for (std::size_t i = 0; i < motion.size(); ++i) {
      SpriteFrame st;
      st.points = detail::points_at(motion[i], t, frame_count);
      st.area_fraction = std::min(1.0, motion[i].area0 * (1.0 + kLayers[i].growth * progress));
      st.pixel_count = std::llround(st.area_fraction * kScreenPixels);
      frame.emplace(kLayers[i].sprite, std::move(st));
    }
    sc.frames.push_back(std::move(frame));
  }
  std::sort(sc.sprites.begin(), sc.sprites.end(), [](const SpriteInfo& a, const SpriteInfo& b) { return a.id < b.id; });
  detail::fit_budget(sc, 1.0);
  validate(sc);
  return sc;
}

}  // namespace spritereg
