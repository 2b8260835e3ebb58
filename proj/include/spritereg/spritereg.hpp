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

#pragma once

#include "spritereg/attention.hpp"
#include "spritereg/compute_cost.hpp"
#include "spritereg/config.hpp"
#include "spritereg/error.hpp"
#include "spritereg/fiducial.hpp"
#include "spritereg/generator.hpp"
#include "spritereg/knapsack.hpp"
#include "spritereg/perceptual_cost.hpp"
#include "spritereg/regulator.hpp"
#include "spritereg/scenario.hpp"
#include "spritereg/scene.hpp"
#include "spritereg/simulation.hpp"
