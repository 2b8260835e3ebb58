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

// Multi-frame scenario: objects, sprite declarations, per-frame sprite state
// and the frame budget, plus its JSON file format (docs/scenario_format.md).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spritereg/compute_cost.hpp"
#include "spritereg/error.hpp"
#include "spritereg/scene.hpp"

namespace spritereg {

using FrameState = std::map<std::string, SpriteFrame>;

struct Scenario {
  double frame_budget = 1.0;
  ComputeCostModel compute_model;
  std::vector<SceneObject> objects;
  std::vector<SpriteInfo> sprites;  // sorted by id
  std::vector<FrameState> frames;
  std::optional<std::uint64_t> seed;

  std::size_t frame_count() const { return frames.size(); }

  const SpriteInfo& sprite(const std::string& id) const {
    auto it = std::lower_bound(sprites.begin(), sprites.end(), id,
                               [](const SpriteInfo& s, const std::string& key) { return s.id < key; });
    if (it == sprites.end() || it->id != id) throw ValidationError("unknown sprite '" + id + "'");
    return *it;
  }

  const SceneObject& object(const std::string& id) const {
    for (const auto& o : objects) {
      if (o.id == id) return o;
    }
    throw ValidationError("unknown object '" + id + "'");
  }

  // Sprites at frame t, ordered by id, with no render history attached.
  std::vector<Sprite> sprites_at(std::size_t t) const {
    std::vector<Sprite> out;
    out.reserve(sprites.size());
    for (const auto& info : sprites) out.push_back(make_sprite(info, frames.at(t).at(info.id)));
    return out;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline void validate_lod_table(const SpriteInfo& s) {
  const auto& lods = s.polygon_budget;
  if (lods.empty()) throw ValidationError("sprite '" + s.id + "': polygon_budget is empty");
  for (std::size_t i = 0; i < lods.size(); ++i) {
    const auto& l = lods[i];
    if (l.level != static_cast<int>(i)) {
      throw ValidationError("sprite '" + s.id + "': polygon_budget levels must be 0,1,2,... in order");
    }
    if (l.polygons < 0 || !std::isfinite(l.geometry_error) || l.geometry_error < 0.0) {
      throw ValidationError("sprite '" + s.id + "': polygon_budget entries must be nonnegative");
    }
    if (i > 0 && (l.polygons > lods[i - 1].polygons || l.geometry_error < lods[i - 1].geometry_error)) {
      throw ValidationError("sprite '" + s.id +
                            "': polygon_budget must have nonincreasing polygons and nondecreasing error");
    }
  }
  if (lods[0].geometry_error != 0.0) {
    throw ValidationError("sprite '" + s.id + "': geometry_error at level 0 must be 0");
  }
}

}  // namespace detail

// Checks every scenario invariant; throws ValidationError naming the first
// violation found.
inline void validate(const Scenario& sc) {
  if (!std::isfinite(sc.frame_budget) || sc.frame_budget <= 0.0) {
    throw ValidationError("frame_budget must be > 0");
  }
  validate(sc.compute_model);
  if (sc.objects.empty()) throw ValidationError("scenario has no objects");
  if (sc.frames.empty()) throw ValidationError("scenario has no frames");

  std::set<std::string> object_ids;
  std::map<std::string, std::string> owner;
  for (const auto& o : sc.objects) {
    if (!object_ids.insert(o.id).second) throw ValidationError("duplicate object id '" + o.id + "'");
    if (o.sprite_ids.empty()) throw ValidationError("object '" + o.id + "' has no sprites");
    for (const auto& sid : o.sprite_ids) {
      if (!owner.emplace(sid, o.id).second) {
        throw ValidationError("sprite '" + sid + "' belongs to more than one object");
      }
    }
    for (const auto& e : o.edge_sprite_ids) {
      if (std::find(o.sprite_ids.begin(), o.sprite_ids.end(), e) == o.sprite_ids.end()) {
        throw ValidationError("object '" + o.id + "': edge sprite '" + e + "' is not a member");
      }
    }
  }

  if (!std::is_sorted(sc.sprites.begin(), sc.sprites.end(),
                      [](const SpriteInfo& a, const SpriteInfo& b) { return a.id < b.id; })) {
    throw ValidationError("sprite declarations must be sorted by id");
  }
  if (sc.sprites.size() != owner.size()) {
    throw ValidationError("sprite declarations do not match object membership");
  }
  for (const auto& s : sc.sprites) {
    auto it = owner.find(s.id);
    if (it == owner.end() || it->second != s.object_id) {
      throw ValidationError("sprite '" + s.id + "' has inconsistent object ownership");
    }
    detail::validate_lod_table(s);
    if (s.max_texture_lod < 0 || s.max_shading_level < 0) {
      throw ValidationError("sprite '" + s.id + "': lod ranges must be >= 0");
    }
  }

  std::map<std::string, std::size_t> point_counts;
  for (std::size_t t = 0; t < sc.frames.size(); ++t) {
    const auto& frame = sc.frames[t];
    const std::string where = "frame " + std::to_string(t);
    for (const auto& [sid, st] : frame) {
      if (!owner.count(sid)) {
        throw ValidationError(where + ": sprite '" + sid + "' is not declared by any object");
      }
    }
    for (const auto& s : sc.sprites) {
      auto it = frame.find(s.id);
      if (it == frame.end()) {
        throw ValidationError(where + ": sprite '" + s.id + "' referenced by an object is absent");
      }
      const auto& st = it->second;
      validate_point_set(st.points, where + ", sprite '" + s.id + "'");
      auto [pc, inserted] = point_counts.emplace(s.id, st.points.size());
      if (!inserted && pc->second != st.points.size()) {
        throw ValidationError(where + ", sprite '" + s.id + "': characteristic point count changed");
      }
      if (!(st.area_fraction >= 0.0 && st.area_fraction <= 1.0)) {
        throw ValidationError(where + ", sprite '" + s.id + "': area_fraction out of range");
      }
      if (st.pixel_count < 0) {
        throw ValidationError(where + ", sprite '" + s.id + "': pixel_count must be >= 0");
      }
      if (!sc.compute_model.allow_nonpositive_savings) {
        const Sprite sp = make_sprite(s, st);
        if (!(render_cost(sp, QualityVector::finest(), sc.compute_model) > warp_cost(sp, sc.compute_model))) {
          throw ValidationError(where + ", sprite '" + s.id +
                                "': full-quality render cost must exceed warp cost");
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

inline void require_keys(const json& j, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (const char* k : required) {
    if (!j.contains(k)) throw ValidationError(where + ": missing key '" + k + "'");
  }
  for (const auto& item : j.items()) {
    const auto& key = item.key();
    auto match = [&](const char* k) { return key == k; };
    if (std::none_of(required.begin(), required.end(), match) &&
        std::none_of(optional.begin(), optional.end(), match)) {
      throw ValidationError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_as(const json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": key '" + key + "' has the wrong type");
  }
}

inline json compute_model_to_json(const ComputeCostModel& m) {
  return json{{"render_base", m.render_base},
              {"render_per_polygon", m.render_per_polygon},
              {"render_per_pixel", m.render_per_pixel},
              {"warp_base", m.warp_base},
              {"warp_per_pixel", m.warp_per_pixel},
              {"allow_nonpositive_savings", m.allow_nonpositive_savings}};
}

}  // namespace detail

// Every key is optional; missing keys keep the values already in `m`.
inline ComputeCostModel compute_model_from_json(const nlohmann::json& j, ComputeCostModel m = {}) {
  const std::string where = "compute_model";
  detail::require_keys(j, {},
                       {"render_base", "render_per_polygon", "render_per_pixel", "warp_base",
                        "warp_per_pixel", "allow_nonpositive_savings"},
                       where);
  auto num = [&](const char* key, double& field) {
    if (j.contains(key)) field = detail::get_as<double>(j, key, where);
  };
  num("render_base", m.render_base);
  num("render_per_polygon", m.render_per_polygon);
  num("render_per_pixel", m.render_per_pixel);
  num("warp_base", m.warp_base);
  num("warp_per_pixel", m.warp_per_pixel);
  if (j.contains("allow_nonpositive_savings")) {
    m.allow_nonpositive_savings = detail::get_as<bool>(j, "allow_nonpositive_savings", where);
  }
  return m;
}

inline nlohmann::json to_json(const Scenario& sc) {
  using nlohmann::json;
  json objects = json::array();
  for (const auto& o : sc.objects) {
    json sprites = json::array();
    for (const auto& sid : o.sprite_ids) {
      const auto& s = sc.sprite(sid);
      json lods = json::array();
      for (const auto& l : s.polygon_budget) lods.push_back(json::array({l.level, l.polygons, l.geometry_error}));
      sprites.push_back(json{{"id", s.id},
                             {"edge", s.edge},
                             {"polygon_budget", lods},
                             {"max_texture_lod", s.max_texture_lod},
                             {"max_shading_level", s.max_shading_level}});
    }
    objects.push_back(json{{"id", o.id}, {"group", std::string(to_string(o.group))}, {"sprites", sprites}});
  }
  json frames = json::array();
  for (const auto& f : sc.frames) {
    json frame = json::object();
    for (const auto& [sid, st] : f) {
      json pts = json::array();
      for (const auto& p : st.points) pts.push_back(json::array({p.x, p.y}));
      frame[sid] = json{{"points", pts}, {"area_fraction", st.area_fraction}, {"pixel_count", st.pixel_count}};
    }
    frames.push_back(std::move(frame));
  }
  json out{{"frame_budget", sc.frame_budget},
           {"compute_model", detail::compute_model_to_json(sc.compute_model)},
           {"objects", objects},
           {"frames", frames}};
  if (sc.seed) out["seed"] = *sc.seed;
  return out;
}

// Parses and validates a scenario document.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::get_as;
  detail::require_keys(j, {"frame_budget", "compute_model", "objects", "frames"}, {"seed"}, "scenario");
  Scenario sc;
  sc.frame_budget = get_as<double>(j, "frame_budget", "scenario");
  sc.compute_model = compute_model_from_json(j.at("compute_model"));
  if (j.contains("seed")) sc.seed = get_as<std::uint64_t>(j, "seed", "scenario");

  const auto& objects = j.at("objects");
  if (!objects.is_array()) throw ValidationError("scenario: 'objects' must be an array");
  for (const auto& jo : objects) {
    detail::require_keys(jo, {"id", "group", "sprites"}, {}, "object");
    SceneObject o;
    o.id = get_as<std::string>(jo, "id", "object");
    const std::string where = "object '" + o.id + "'";
    o.group = parse_group(get_as<std::string>(jo, "group", where));
    if (!jo.at("sprites").is_array()) throw ValidationError(where + ": 'sprites' must be an array");
    for (const auto& js : jo.at("sprites")) {
      detail::require_keys(js, {"id"}, {"edge", "polygon_budget", "max_texture_lod", "max_shading_level"},
                           where + " sprite");
      SpriteInfo s;
      s.id = get_as<std::string>(js, "id", where);
      s.object_id = o.id;
      const std::string swhere = "sprite '" + s.id + "'";
      if (js.contains("edge")) s.edge = get_as<bool>(js, "edge", swhere);
      if (js.contains("max_texture_lod")) s.max_texture_lod = get_as<int>(js, "max_texture_lod", swhere);
      if (js.contains("max_shading_level")) s.max_shading_level = get_as<int>(js, "max_shading_level", swhere);
      if (js.contains("polygon_budget")) {
        s.polygon_budget.clear();
        for (const auto& jl : js.at("polygon_budget")) {
          if (!jl.is_array() || jl.size() != 3) {
            throw ValidationError(swhere + ": polygon_budget entries are [level, polygons, geometry_error]");
          }
          try {
            s.polygon_budget.push_back({jl[0].get<int>(), jl[1].get<std::int64_t>(), jl[2].get<double>()});
          } catch (const nlohmann::json::exception&) {
            throw ValidationError(swhere + ": malformed polygon_budget entry");
          }
        }
      }
      o.sprite_ids.push_back(s.id);
      if (s.edge) o.edge_sprite_ids.push_back(s.id);
      sc.sprites.push_back(std::move(s));
    }
    sc.objects.push_back(std::move(o));
  }
  std::sort(sc.sprites.begin(), sc.sprites.end(),
            [](const SpriteInfo& a, const SpriteInfo& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < sc.sprites.size(); ++i) {
    if (sc.sprites[i].id == sc.sprites[i - 1].id) {
      throw ValidationError("sprite '" + sc.sprites[i].id + "' belongs to more than one object");
    }
  }

  const auto& frames = j.at("frames");
  if (!frames.is_array()) throw ValidationError("scenario: 'frames' must be an array");
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const auto& jf = frames[t];
    const std::string where = "frame " + std::to_string(t);
    if (!jf.is_object()) throw ValidationError(where + ": expected a map of sprite id to state");
    FrameState frame;
    for (const auto& item : jf.items()) {
      const std::string swhere = where + ", sprite '" + item.key() + "'";
      const auto& js = item.value();
      detail::require_keys(js, {"points", "area_fraction", "pixel_count"}, {}, swhere);
      SpriteFrame st;
      st.area_fraction = get_as<double>(js, "area_fraction", swhere);
      st.pixel_count = get_as<std::int64_t>(js, "pixel_count", swhere);
      if (!js.at("points").is_array()) throw ValidationError(swhere + ": 'points' must be an array");
      for (const auto& jp : js.at("points")) {
        if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number() || !jp[1].is_number()) {
          throw ValidationError(swhere + ": points are [x, y] pairs");
        }
        st.points.push_back({jp[0].get<double>(), jp[1].get<double>()});
      }
      frame.emplace(item.key(), std::move(st));
    }
    sc.frames.push_back(std::move(frame));
  }

  validate(sc);
  return sc;
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("scenario parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline void save_scenario(const Scenario& sc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write scenario file '" + path + "'");
  out << to_json(sc).dump(1) << '\n';
}

}  // namespace spritereg
