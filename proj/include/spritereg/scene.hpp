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

// Core scene data model: sprites, their characteristic points, the objects
// they belong to, and the quality knobs a sprite can be rendered with.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spritereg/error.hpp"

namespace spritereg {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

// Characteristic points of one sprite, in screen pixels. Correspondence is by
// index across frames.
using PointSet = std::vector<Point2>;

inline constexpr std::size_t kMinCharacteristicPoints = 3;

inline void validate_point_set(const PointSet& points, std::string_view what) {
  if (points.size() < kMinCharacteristicPoints) {
    throw ValidationError(std::string(what) + ": needs at least 3 characteristic points, got " +
                          std::to_string(points.size()));
  }
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ValidationError(std::string(what) + ": non-finite characteristic point");
    }
  }
}

// Author-assigned attention class of a scene object.
enum class Group {
  kPrimaryActor = 0,
  kSecondaryActor = 1,
  kCriticalEnvironment = 2,
  kBackgroundEnvironment = 3,
};

inline constexpr std::array<Group, 4> kAllGroups = {
    Group::kPrimaryActor, Group::kSecondaryActor, Group::kCriticalEnvironment,
    Group::kBackgroundEnvironment};

inline std::string_view to_string(Group g) {
  switch (g) {
    case Group::kPrimaryActor:
      return "primary_actor";
    case Group::kSecondaryActor:
      return "secondary_actor";
    case Group::kCriticalEnvironment:
      return "critical_environment";
    case Group::kBackgroundEnvironment:
      return "background_environment";
  }
  return "unknown";
}

inline Group parse_group(std::string_view name) {
  for (Group g : kAllGroups) {
    if (to_string(g) == name) return g;
  }
  throw ValidationError("unknown object group '" + std::string(name) + "'");
}

// One entry of a sprite's level-of-detail table. Level 0 is the full model.
struct LodLevel {
  int level = 0;
  std::int64_t polygons = 0;
  double geometry_error = 0.0;

  friend bool operator==(const LodLevel&, const LodLevel&) = default;
};

// Per-sprite rendering knobs. Larger lod/shading values and smaller
// spatial_factor are coarser.
struct QualityVector {
  double spatial_factor = 1.0;
  int texture_lod = 0;
  int geometry_lod = 0;
  int shading_level = 0;

  static constexpr QualityVector finest() { return {}; }
  bool is_finest() const { return *this == finest(); }

  friend bool operator==(const QualityVector&, const QualityVector&) = default;
};

// State captured when a sprite was last re-rendered; a warp reuses it.
struct RenderRecord {
  PointSet points;
  std::size_t frame = 0;
  QualityVector quality;

  friend bool operator==(const RenderRecord&, const RenderRecord&) = default;
};

// Static declaration of a sprite, constant over a scenario.
struct SpriteInfo {
  std::string id;
  std::string object_id;
  bool edge = false;
  std::vector<LodLevel> polygon_budget{LodLevel{}};
  int max_texture_lod = 0;
  int max_shading_level = 0;

  friend bool operator==(const SpriteInfo&, const SpriteInfo&) = default;
};

// Per-frame state of a sprite as given by the scenario.
struct SpriteFrame {
  PointSet points;
  double area_fraction = 0.0;
  std::int64_t pixel_count = 0;

  friend bool operator==(const SpriteFrame&, const SpriteFrame&) = default;
};

// The unit of regulation: a sprite as seen by the regulator at one frame.
struct Sprite {
  std::string id;
  std::string object_id;
  bool edge = false;
  double area_fraction = 0.0;
  std::int64_t pixel_count = 0;
  PointSet points_gold;
  std::optional<RenderRecord> last_render;
  std::vector<LodLevel> polygon_budget{LodLevel{}};
  int max_texture_lod = 0;
  int max_shading_level = 0;

  bool warp_eligible() const { return last_render.has_value(); }
};

inline Sprite make_sprite(const SpriteInfo& info, const SpriteFrame& frame,
                          std::optional<RenderRecord> last_render = std::nullopt) {
  Sprite s;
  s.id = info.id;
  s.object_id = info.object_id;
  s.edge = info.edge;
  s.area_fraction = frame.area_fraction;
  s.pixel_count = frame.pixel_count;
  s.points_gold = frame.points;
  s.last_render = std::move(last_render);
  s.polygon_budget = info.polygon_budget;
  s.max_texture_lod = info.max_texture_lod;
  s.max_shading_level = info.max_shading_level;
  return s;
}

// Throws if q is outside the sprite's declared knob ranges.
inline void validate_quality(const Sprite& sprite, const QualityVector& q) {
  if (!(q.spatial_factor > 0.0 && q.spatial_factor <= 1.0)) {
    throw ValidationError("sprite '" + sprite.id + "': spatial_factor out of range (0,1]");
  }
  if (q.texture_lod < 0 || q.texture_lod > sprite.max_texture_lod) {
    throw ValidationError("sprite '" + sprite.id + "': texture_lod out of range");
  }
  if (q.geometry_lod < 0 || static_cast<std::size_t>(q.geometry_lod) >= sprite.polygon_budget.size()) {
    throw ValidationError("sprite '" + sprite.id + "': geometry_lod out of range");
  }
  if (q.shading_level < 0 || q.shading_level > sprite.max_shading_level) {
    throw ValidationError("sprite '" + sprite.id + "': shading_level out of range");
  }
}

struct SceneObject {
  std::string id;
  Group group = Group::kBackgroundEnvironment;
  std::vector<std::string> sprite_ids;
  std::vector<std::string> edge_sprite_ids;

  friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

}  // namespace spritereg
