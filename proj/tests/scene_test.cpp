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

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "spritereg/fiducial.hpp"
#include "spritereg/generator.hpp"
#include "spritereg/scenario.hpp"

namespace spritereg {
namespace {

std::string data(const std::string& name) { return std::string(SPRITEREG_TEST_DATA_DIR) + "/" + name; }

std::string load_error(const std::string& path) {
  try {
    load_scenario(path);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

TEST(ScenarioLoad, HandWrittenFixture) {
  const Scenario sc = load_scenario(data("two_sprites.json"));
  EXPECT_EQ(sc.frame_count(), 10u);
  EXPECT_DOUBLE_EQ(sc.frame_budget, 100.0);
  ASSERT_EQ(sc.sprites.size(), 2u);
  EXPECT_EQ(sc.sprites[0].id, "ground");  // sorted by id
  EXPECT_EQ(sc.sprite("hero").object_id, "player");
  EXPECT_EQ(sc.sprite("hero").polygon_budget.size(), 3u);
  EXPECT_EQ(sc.object("player").edge_sprite_ids, std::vector<std::string>{"hero"});
  EXPECT_EQ(sc.object("terrain").group, Group::kBackgroundEnvironment);
  EXPECT_EQ(sc.frames[4].at("hero").points[0], (Point2{14, 10}));
}

TEST(ScenarioLoad, RejectsAreaOutOfRange) {
  EXPECT_NE(load_error(data("bad_area.json")).find("area_fraction out of range"), std::string::npos);
}

TEST(ScenarioLoad, RejectsSpriteMissingFromFrame) {
  const auto msg = load_error(data("missing_sprite.json"));
  EXPECT_NE(msg.find("frame 5"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'ground'"), std::string::npos) << msg;
}

TEST(ScenarioLoad, RejectsUnknownTopLevelKey) {
  EXPECT_NE(load_error(data("unknown_key.json")).find("unknown key 'camera'"), std::string::npos);
}

TEST(ScenarioLoad, RejectsMalformedJson) {
  EXPECT_NE(load_error(data("malformed.json")).find("parse error"), std::string::npos);
  EXPECT_NE(load_error(data("does_not_exist.json")).find("cannot open"), std::string::npos);
}

TEST(ScenarioValidate, NamedInvariants) {
  Scenario sc = load_scenario(data("two_sprites.json"));

  Scenario bad = sc;
  bad.frame_budget = 0.0;
  EXPECT_THROW(validate(bad), ValidationError);

  bad = sc;
  bad.frames[2]["hero"].points.pop_back();
  EXPECT_THROW(validate(bad), ValidationError);  // point count changed

  bad = sc;
  bad.frames[0]["hero"].points.resize(2);
  EXPECT_THROW(validate(bad), ValidationError);  // fewer than 3 points

  bad = sc;
  bad.objects[0].edge_sprite_ids = {"ground"};
  EXPECT_THROW(validate(bad), ValidationError);  // edge sprite not a member

  bad = sc;
  bad.sprites[1].polygon_budget[1].polygons = 9000;
  EXPECT_THROW(validate(bad), ValidationError);  // LOD polygons increase

  bad = sc;
  bad.compute_model.warp_base = 1000.0;
  EXPECT_THROW(validate(bad), ValidationError);  // warping dearer than rendering
  bad.compute_model.allow_nonpositive_savings = true;
  EXPECT_NO_THROW(validate(bad));
}

TEST(ScenarioJson, RoundTripIsStructurallyIdentical) {
  GeneratorSpec spec;
  spec.sprite_count = 9;
  spec.frame_count = 6;
  spec.growth = 0.5;
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    const Scenario sc = generate_synthetic(spec, seed);
    EXPECT_EQ(scenario_from_json(to_json(sc)), sc) << "seed " << seed;
  }
  const Scenario fixture = load_scenario(data("two_sprites.json"));
  const auto path = std::filesystem::temp_directory_path() / "spritereg_roundtrip.json";
  save_scenario(fixture, path.string());
  EXPECT_EQ(load_scenario(path.string()), fixture);
  std::filesystem::remove(path);
}

TEST(DemoScenario, ShippedFileMatchesBuilder) {
  const Scenario shipped = load_scenario(SPRITEREG_DEMO_SCENARIO);
  EXPECT_GE(shipped.sprites.size(), 6u);
  EXPECT_GE(shipped.objects.size(), 3u);
  EXPECT_EQ(shipped, spacecraft_demo());
  bool has_primary = false;
  bool has_background = false;
  for (const auto& o : shipped.objects) {
    has_primary = has_primary || o.group == Group::kPrimaryActor;
    has_background = has_background || o.group == Group::kBackgroundEnvironment;
  }
  EXPECT_TRUE(has_primary);
  EXPECT_TRUE(has_background);
}

TEST(Generator, StaticSpritesNeverMove) {
  GeneratorSpec spec;
  spec.sprite_count = 3;
  spec.frame_count = 5;
  spec.motion_weights = {1.0, 0.0, 0.0, 0.0};
  const Scenario sc = generate_synthetic(spec, 1);
  for (std::size_t t = 1; t < sc.frame_count(); ++t) {
    for (const auto& s : sc.sprites) EXPECT_EQ(sc.frames[t].at(s.id).points, sc.frames[0].at(s.id).points);
  }
}

TEST(Generator, Deterministic) {
  GeneratorSpec spec;
  spec.sprite_count = 3;
  spec.frame_count = 5;
  EXPECT_EQ(generate_synthetic(spec, 1), generate_synthetic(spec, 1));
  EXPECT_NE(generate_synthetic(spec, 1), generate_synthetic(spec, 2));
}

TEST(Generator, TranslatingSpritesWarpExactly) {
  GeneratorSpec spec;
  spec.sprite_count = 20;
  spec.frame_count = 100;
  const Scenario sc = generate_synthetic(spec, 7);
  EXPECT_EQ(sc.frame_count(), 100u);
  // Identify translating sprites: every point moves by the same offset.
  int translating = 0;
  for (const auto& s : sc.sprites) {
    const auto& p0 = sc.frames[0].at(s.id).points;
    const auto& p9 = sc.frames[99].at(s.id).points;
    const double dx = p9[0].x - p0[0].x;
    const double dy = p9[0].y - p0[0].y;
    bool rigid_shift = dx != 0.0 || dy != 0.0;
    for (std::size_t k = 0; k < p0.size(); ++k) {
      rigid_shift = rigid_shift && std::abs(p9[k].x - p0[k].x - dx) < 1e-9 && std::abs(p9[k].y - p0[k].y - dy) < 1e-9;
    }
    if (!rigid_shift) continue;
    ++translating;
    EXPECT_LE(fit_affine(p0, p9).residual, 1e-9) << s.id;
  }
  EXPECT_GT(translating, 0);
}

TEST(Generator, RejectsEmptySpecs) {
  GeneratorSpec spec;
  spec.sprite_count = 0;
  EXPECT_THROW(generate_synthetic(spec, 1), ValidationError);
  spec.sprite_count = 1;
  spec.frame_count = 0;
  EXPECT_THROW(generate_synthetic(spec, 1), ValidationError);
}

TEST(Generator, BudgetCoversBootstrapFrame) {
  GeneratorSpec spec;
  spec.growth = 2.0;
  const Scenario sc = generate_synthetic(spec, 5);
  double render0 = 0.0;
  for (const auto& s : sc.sprites_at(0)) render0 += render_cost(s, QualityVector::finest(), sc.compute_model);
  EXPECT_GE(sc.frame_budget, render0);
}

}  // namespace
}  // namespace spritereg
