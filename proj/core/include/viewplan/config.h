// Copyright 2026 The viewplan Authors. All Rights Reserved.
//
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

#ifndef VIEWPLAN_CONFIG_H_
#define VIEWPLAN_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "viewplan/acquisition.h"
#include "viewplan/geometry.h"
#include "viewplan/gp.h"
#include "viewplan/planner.h"
#include "viewplan/reward.h"
#include "viewplan/scene.h"

namespace viewplan {

// Everything a command needs. Fields left at 0 / empty are resolved per scene
// (see Resolve*), and the resolved values are what gets written to outputs.
struct RunConfig {
  // points_per_plant 0 picks DefaultPointsPerPlant for the layout.
  SceneSpec scene{Layout::kSingle, 1.0, 0, 1.0, 7};
  std::vector<Layout> scenes;  // experiment only; empty means {scene.layout}
  std::string ply_path;        // plan/baseline: load the clean cloud from PLY
  NoiseModel noise;
  RewardParams reward;
  int cameras = 0;             // 0: 4 for single, 6 for row3 and grid9
  KernelFamily kernel = KernelFamily::kMatern25;
  std::vector<KernelFamily> kernels = {KernelFamily::kRbf, KernelFamily::kArdRbf,
                                       KernelFamily::kMatern25,
                                       KernelFamily::kMatern15};
  int n_init = 50;
  int n_iters = 200;
  std::uint64_t seed = 0;
  int realization = 0;         // noise realization used by plan/baseline
  int n_realizations = 5;
  int n_candidates = 50;
  std::optional<SearchSpace> space;
  double box_margin = 1.5;
  double box_top_margin = 0.5;
  EiSearchOptions ei;
  int refit_every = 0;
  bool resample_noise = false;
  double optimum = 1.0;
  std::string out_dir = "out";
  int threads = 1;
};

int DefaultCameraCount(Layout layout);
// Points per plant keeping every layout at or under 2000 points.
int DefaultPointsPerPlant(Layout layout);

// Reduced budget for quick runs: 10 initial points, 30 iterations, one
// realization.
void ApplySmoke(RunConfig* config);

nlohmann::json ToJson(const RunConfig& config);
// Missing keys keep their defaults; unknown kernel/layout names raise
// DomainError.
RunConfig RunConfigFromJson(const nlohmann::json& j);

// Scene spec for `layout` with per-layout defaults filled in.
SceneSpec ResolveSceneSpec(const RunConfig& config, Layout layout);

BoConfig ResolveBoConfig(const RunConfig& config, Layout layout,
                         const PointCloud& clean_cloud);

ExperimentConfig ResolveExperimentConfig(const RunConfig& config, Layout layout);

}  // namespace viewplan

#endif  // VIEWPLAN_CONFIG_H_
