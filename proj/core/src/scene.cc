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

#include "viewplan/scene.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "viewplan/errors.h"

namespace viewplan {
namespace {

constexpr double kGoldenAngle = 2.39996322972865332;

std::vector<Point3> PlantAnchors(const SceneSpec& spec) {
  const double s = spec.plant_spacing;
  switch (spec.layout) {
    case Layout::kSingle:
      return {Point3::Zero()};
    case Layout::kRow3:
      return {Point3(-s, 0, 0), Point3(0, 0, 0), Point3(s, 0, 0)};
    case Layout::kGrid9: {
      std::vector<Point3> out;
      for (int j = -1; j <= 1; ++j) {
        for (int i = -1; i <= 1; ++i) out.emplace_back(i * s, j * s, 0.0);
      }
      return out;
    }
  }
  throw DomainError("unknown layout");
}

// Points of one unit plant in its local frame (base at the origin, stem along
// +z, height `h`).
std::vector<Point3> GeneratePlant(int count, double h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 1.0);

  const int stem_count = std::max(2, count / 4);
  const int leaves = 4 + static_cast<int>(unit(rng) * 5.0) % 5;  // 4..8

  std::vector<Point3> pts;
  pts.reserve(static_cast<std::size_t>(count));
  const double stem_radius = 0.012 * h;
  for (int k = 0; k < stem_count; ++k) {
    const double z = h * (static_cast<double>(k) + unit(rng)) / stem_count;
    pts.emplace_back(stem_radius * jitter(rng), stem_radius * jitter(rng), z);
  }

  const int leaf_points = count - stem_count;
  for (int leaf = 0; leaf < leaves; ++leaf) {
    const int first = leaf_points * leaf / leaves;
    const int last = leaf_points * (leaf + 1) / leaves;
    const double attach =
        h * (0.25 + 0.6 * (leaf + 0.5 * unit(rng)) / leaves);
    const double azimuth = leaf * kGoldenAngle + 0.3 * (unit(rng) - 0.5);
    const double length = h * (0.3 + 0.2 * unit(rng)) * (1.1 - 0.5 * attach / h);
    const double rise = 0.9 + 0.4 * unit(rng);
    const double width = 0.03 * h;
    const Vector3 out(std::cos(azimuth), std::sin(azimuth), 0.0);
    const Vector3 side(-out.y(), out.x(), 0.0);
    for (int k = first; k < last; ++k) {
      // Arc rises from the stem then droops toward the tip.
      const double s = unit(rng);
      const double taper = std::sin(kPi * std::max(s, 0.05));
      const Point3 p = Point3(0, 0, attach) + length * s * out +
                       Vector3(0, 0, length * (rise * s - 1.2 * s * s)) +
                       width * taper * (unit(rng) - 0.5) * side;
      pts.push_back(p);
    }
  }
  return pts;
}

}  // namespace

std::string_view LayoutName(Layout layout) {
  switch (layout) {
    case Layout::kSingle: return "single";
    case Layout::kRow3: return "row3";
    case Layout::kGrid9: return "grid9";
  }
  return "unknown";
}

Layout ParseLayout(std::string_view name) {
  if (name == "single") return Layout::kSingle;
  if (name == "row3") return Layout::kRow3;
  if (name == "grid9") return Layout::kGrid9;
  throw DomainError("unknown scene layout '" + std::string(name) +
                    "' (expected single, row3 or grid9)");
}

std::size_t PlantCount(Layout layout) {
  switch (layout) {
    case Layout::kSingle: return 1;
    case Layout::kRow3: return 3;
    case Layout::kGrid9: return 9;
  }
  return 0;
}

void SceneSpec::Validate() const {
  if (points_per_plant < 10) {
    throw DomainError("points_per_plant must be at least 10");
  }
  if (!(plant_spacing > 0.0) || !std::isfinite(plant_spacing)) {
    throw DomainError("plant_spacing must be positive");
  }
  if (!(base_height > 0.0) || !std::isfinite(base_height)) {
    throw DomainError("base_height must be positive");
  }
  if (layout != Layout::kSingle && layout != Layout::kRow3 &&
      layout != Layout::kGrid9) {
    throw DomainError("unknown scene layout");
  }
}

Scene GenerateScene(const SceneSpec& spec) {
  spec.Validate();
  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Scene scene;
  scene.spec = spec;
  std::vector<Point3> points;
  for (const Point3& anchor : PlantAnchors(spec)) {
    PlantRange range;
    range.anchor = anchor;
    range.rotation = 2.0 * kPi * unit(rng);
    range.scale = 0.9 + 0.2 * unit(rng);
    range.begin = points.size();

    const Eigen::Matrix3d rot =
        Eigen::AngleAxisd(range.rotation, Vector3::UnitZ()).toRotationMatrix();
    for (const Point3& local :
         GeneratePlant(spec.points_per_plant, spec.base_height, rng)) {
      points.push_back(anchor + range.scale * (rot * local));
    }
    range.end = points.size();
    scene.plants.push_back(range);
  }
  scene.cloud = PointCloud(std::move(points));
  return scene;
}

void NoiseModel::Validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("noise sigma must be non-negative");
  }
  CheckFinite(direction, "noise direction");
  if (std::abs(direction.norm() - 1.0) > 1e-12) {
    throw DomainError("noise direction must be a unit vector");
  }
}

NoiseRealization SampleRealization(const NoiseModel& model, const Scene& scene,
                                   std::int64_t realization_id) {
  model.Validate();
  std::seed_seq seq{static_cast<std::uint64_t>(model.rng_seed),
                    static_cast<std::uint64_t>(realization_id)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);

  NoiseRealization out;
  out.realization_id = realization_id;
  out.offsets.assign(scene.cloud.size(), Vector3::Zero());

  const double shared = model.sigma * normal(rng);
  for (const PlantRange& plant : scene.plants) {
    if (plant.end > scene.cloud.size() || plant.begin > plant.end) {
      throw DomainError("plant range exceeds the cloud");
    }
    const double s = model.shared_draw ? shared : model.sigma * normal(rng);
    out.draws.push_back(s);
    if (plant.begin == plant.end) continue;

    double z_min = scene.cloud[plant.begin].z();
    double z_max = z_min;
    for (std::size_t k = plant.begin; k < plant.end; ++k) {
      z_min = std::min(z_min, scene.cloud[k].z());
      z_max = std::max(z_max, scene.cloud[k].z());
    }
    const double span = z_max - z_min;
    for (std::size_t k = plant.begin; k < plant.end; ++k) {
      const double frac = span > 0.0 ? (scene.cloud[k].z() - z_min) / span : 0.0;
      out.offsets[k] = (s * frac) * model.direction;
    }
  }
  return out;
}

NoiseRealization SampleRealization(const NoiseModel& model,
                                   const PointCloud& cloud,
                                   std::int64_t realization_id) {
  Scene scene;
  scene.cloud = cloud;
  scene.plants.push_back({0, cloud.size(), Point3::Zero(), 0.0, 1.0});
  return SampleRealization(model, scene, realization_id);
}

PointCloud ApplyNoise(const PointCloud& cloud,
                      const NoiseRealization& realization) {
  if (cloud.size() != realization.offsets.size()) {
    throw DomainError("noise realization has " +
                      std::to_string(realization.offsets.size()) +
                      " offsets for a cloud of " + std::to_string(cloud.size()) +
                      " points");
  }
  std::vector<Point3> out;
  out.reserve(cloud.size());
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    out.push_back(cloud[k] + realization.offsets[k]);
  }
  return PointCloud(std::move(out));
}

}  // namespace viewplan
