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

#ifndef VIEWPLAN_SCENE_H_
#define VIEWPLAN_SCENE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "viewplan/geometry.h"
#include "viewplan/reward.h"

namespace viewplan {

enum class Layout { kSingle, kRow3, kGrid9 };

std::string_view LayoutName(Layout layout);
// Accepts "single", "row3" and "grid9"; throws DomainError otherwise.
Layout ParseLayout(std::string_view name);
std::size_t PlantCount(Layout layout);

struct SceneSpec {
  Layout layout = Layout::kSingle;
  double plant_spacing = 1.0;   // metres between neighbouring plant bases
  int points_per_plant = 500;
  double base_height = 1.0;     // nominal plant height before the +-10% scale
  std::uint64_t rng_seed = 7;

  void Validate() const;
};

// Contiguous index range [begin, end) of one plant inside the scene cloud.
struct PlantRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  Point3 anchor = Point3::Zero();  // base of the stem
  double rotation = 0.0;           // radians about +z
  double scale = 1.0;
};

struct Scene {
  SceneSpec spec;
  PointCloud cloud;
  std::vector<PlantRange> plants;
};

// Procedural plant field. Each plant is a jittered vertical stem plus 4-8
// leaf arcs, randomly rotated about its stem and scaled within 10%.
// Bit-deterministic in spec.rng_seed.
Scene GenerateScene(const SceneSpec& spec);

// Height-graded motion noise: one scalar s ~ Normal(0, sigma^2) per plant
// (or one for the whole scene when `shared_draw`), displacing each point by
// s * direction * (z - z_min) / (z_max - z_min) of its plant.
struct NoiseModel {
  double sigma = 0.07071067811865475;  // sqrt(0.005)
  Vector3 direction = Vector3::UnitX();
  std::uint64_t rng_seed = 11;
  bool shared_draw = false;

  void Validate() const;
};

struct NoiseRealization {
  std::vector<Vector3> offsets;
  std::int64_t realization_id = 0;
  std::vector<double> draws;  // the scalar s of each plant
};

NoiseRealization SampleRealization(const NoiseModel& model, const Scene& scene,
                                   std::int64_t realization_id);

// Treats the whole cloud as a single plant.
NoiseRealization SampleRealization(const NoiseModel& model,
                                   const PointCloud& cloud,
                                   std::int64_t realization_id);

// p_k + offset_k for every point, order preserved.
PointCloud ApplyNoise(const PointCloud& cloud,
                      const NoiseRealization& realization);

}  // namespace viewplan

#endif  // VIEWPLAN_SCENE_H_
