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

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "viewplan/errors.h"

namespace viewplan {
namespace {

Point3 PlantCentroid(const Scene& scene, const PlantRange& plant) {
  Point3 sum = Point3::Zero();
  for (std::size_t k = plant.begin; k < plant.end; ++k) sum += scene.cloud[k];
  return sum / static_cast<double>(plant.end - plant.begin);
}

std::size_t TopPoint(const Scene& scene, const PlantRange& plant) {
  std::size_t best = plant.begin;
  for (std::size_t k = plant.begin; k < plant.end; ++k) {
    if (scene.cloud[k].z() > scene.cloud[best].z()) best = k;
  }
  return best;
}

TEST(LayoutTest, NamesRoundTrip) {
  for (Layout l : {Layout::kSingle, Layout::kRow3, Layout::kGrid9}) {
    EXPECT_EQ(ParseLayout(LayoutName(l)), l);
  }
  EXPECT_EQ(PlantCount(Layout::kGrid9), 9u);
  EXPECT_THROW(ParseLayout("forest"), DomainError);
}

TEST(GenerateSceneTest, SeededDeterminism) {
  SceneSpec spec;
  spec.points_per_plant = 500;
  spec.rng_seed = 7;
  const Scene a = GenerateScene(spec);
  const Scene b = GenerateScene(spec);
  ASSERT_EQ(a.cloud.size(), 500u);
  ASSERT_EQ(a.cloud.points(), b.cloud.points());

  spec.rng_seed = 8;
  EXPECT_NE(GenerateScene(spec).cloud.points(), a.cloud.points());
}

TEST(GenerateSceneTest, InvalidSpecIsDomainError) {
  SceneSpec spec;
  spec.points_per_plant = 9;
  EXPECT_THROW(GenerateScene(spec), DomainError);
  spec = SceneSpec{};
  spec.plant_spacing = 0.0;
  EXPECT_THROW(GenerateScene(spec), DomainError);
  spec = SceneSpec{};
  spec.layout = static_cast<Layout>(42);
  EXPECT_THROW(GenerateScene(spec), DomainError);
}

TEST(GenerateSceneTest, PlantShapeAndScale) {
  SceneSpec spec;
  spec.layout = Layout::kRow3;
  spec.points_per_plant = 400;
  const Scene scene = GenerateScene(spec);
  ASSERT_EQ(scene.plants.size(), 3u);
  for (const PlantRange& plant : scene.plants) {
    EXPECT_EQ(plant.end - plant.begin, 400u);
    EXPECT_GE(plant.scale, 0.9);
    EXPECT_LE(plant.scale, 1.1);
    EXPECT_GE(plant.rotation, 0.0);
    EXPECT_LT(plant.rotation, 2 * kPi);
    double z_min = 1e9, z_max = -1e9;
    for (std::size_t k = plant.begin; k < plant.end; ++k) {
      z_min = std::min(z_min, scene.cloud[k].z());
      z_max = std::max(z_max, scene.cloud[k].z());
    }
    EXPECT_GE(z_min, -0.05);
    EXPECT_GT(z_max, 0.5 * spec.base_height);
    EXPECT_LT(z_max, 1.5 * spec.base_height);
  }
}

TEST(GenerateSceneTest, Row3AnchorsCollinear) {
  SceneSpec spec;
  spec.layout = Layout::kRow3;
  spec.plant_spacing = 1.3;
  const Scene scene = GenerateScene(spec);
  ASSERT_EQ(scene.plants.size(), 3u);
  const Vector3 d1 = scene.plants[1].anchor - scene.plants[0].anchor;
  const Vector3 d2 = scene.plants[2].anchor - scene.plants[0].anchor;
  EXPECT_LT(d1.cross(d2).norm(), 1e-9);
  EXPECT_NEAR(d1.norm(), 1.3, 1e-12);
  for (const PlantRange& plant : scene.plants) {
    const Point3 c = PlantCentroid(scene, plant);
    EXPECT_LT((c - plant.anchor).head<2>().norm(), 0.5 * spec.plant_spacing);
  }
}

TEST(GenerateSceneTest, Grid9CentroidsOnLattice) {
  SceneSpec spec;
  spec.layout = Layout::kGrid9;
  spec.points_per_plant = 200;
  spec.plant_spacing = 1.0;
  const Scene scene = GenerateScene(spec);
  ASSERT_EQ(scene.plants.size(), 9u);
  std::vector<Point3> centroids;
  for (const PlantRange& plant : scene.plants) {
    centroids.push_back(PlantCentroid(scene, plant));
    EXPECT_LT((centroids.back() - plant.anchor).head<2>().norm(), 0.5);
  }
  for (int i = -1; i <= 1; ++i) {
    for (int j = -1; j <= 1; ++j) {
      const int hits = static_cast<int>(std::count_if(
          centroids.begin(), centroids.end(), [&](const Point3& c) {
            return std::abs(c.x() - i) < 0.5 && std::abs(c.y() - j) < 0.5;
          }));
      EXPECT_EQ(hits, 1) << "lattice site " << i << "," << j;
    }
  }
}

TEST(SampleRealizationTest, ZeroSigmaGivesZeroOffsets) {
  const Scene scene = GenerateScene(SceneSpec{Layout::kRow3, 1.0, 100, 1.0, 3});
  NoiseModel noise;
  noise.sigma = 0.0;
  const NoiseRealization r = SampleRealization(noise, scene, 5);
  ASSERT_EQ(r.offsets.size(), scene.cloud.size());
  for (const Vector3& o : r.offsets) EXPECT_EQ(o, Vector3::Zero());
}

TEST(SampleRealizationTest, DeterministicPerIdAndIndependentPerPlant) {
  const Scene scene = GenerateScene(SceneSpec{Layout::kGrid9, 1.0, 50, 1.0, 3});
  const NoiseModel noise;
  const NoiseRealization a = SampleRealization(noise, scene, 2);
  const NoiseRealization b = SampleRealization(noise, scene, 2);
  const NoiseRealization c = SampleRealization(noise, scene, 3);
  EXPECT_EQ(a.offsets, b.offsets);
  EXPECT_EQ(a.realization_id, 2);
  EXPECT_NE(a.draws, c.draws);
  ASSERT_EQ(a.draws.size(), 9u);
  EXPECT_NE(a.draws[0], a.draws[1]);

  NoiseModel shared = noise;
  shared.shared_draw = true;
  const NoiseRealization s = SampleRealization(shared, scene, 2);
  for (double d : s.draws) EXPECT_EQ(d, s.draws[0]);
}

TEST(SampleRealizationTest, BaseStillTopMovesFully) {
  const Scene scene = GenerateScene(SceneSpec{Layout::kRow3, 1.0, 200, 1.0, 9});
  NoiseModel noise;
  noise.sigma = 0.5;
  const NoiseRealization r = SampleRealization(noise, scene, 1);
  for (std::size_t i = 0; i < scene.plants.size(); ++i) {
    const PlantRange& plant = scene.plants[i];
    std::size_t low = plant.begin;
    for (std::size_t k = plant.begin; k < plant.end; ++k) {
      if (scene.cloud[k].z() < scene.cloud[low].z()) low = k;
    }
    EXPECT_EQ(r.offsets[low], Vector3::Zero());
    EXPECT_DOUBLE_EQ(r.offsets[TopPoint(scene, plant)].x(), r.draws[i]);
  }
}

TEST(SampleRealizationTest, OffsetsParallelAndMonotoneInHeight) {
  const Scene scene = GenerateScene(SceneSpec{Layout::kRow3, 1.0, 200, 1.0, 4});
  NoiseModel noise;
  noise.direction = Vector3(0.6, 0.8, 0.0);
  for (int id = 0; id < 20; ++id) {
    const NoiseRealization r = SampleRealization(noise, scene, id);
    for (std::size_t i = 0; i < scene.plants.size(); ++i) {
      const PlantRange& plant = scene.plants[i];
      std::vector<std::size_t> order;
      for (std::size_t k = plant.begin; k < plant.end; ++k) {
        ASSERT_LT(r.offsets[k].cross(noise.direction).norm(), 1e-15);
        order.push_back(k);
      }
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scene.cloud[a].z() < scene.cloud[b].z();
      });
      for (std::size_t k = 1; k < order.size(); ++k) {
        ASSERT_LE(r.offsets[order[k - 1]].norm(), r.offsets[order[k]].norm());
      }
    }
  }
}

TEST(SampleRealizationTest, DegeneratePlantIsRigid) {
  const PointCloud flat({Point3(0, 0, 1), Point3(1, 0, 1), Point3(0, 1, 1)});
  NoiseModel noise;
  noise.sigma = 1.0;
  const NoiseRealization r = SampleRealization(noise, flat, 0);
  for (const Vector3& o : r.offsets) EXPECT_EQ(o, Vector3::Zero());
}

TEST(SampleRealizationTest, InvalidModelIsDomainError) {
  const PointCloud cloud({Point3(0, 0, 0), Point3(0, 0, 1)});
  NoiseModel noise;
  noise.sigma = -1.0;
  EXPECT_THROW(SampleRealization(noise, cloud, 0), DomainError);
  noise = NoiseModel{};
  noise.direction = Vector3(1, 1, 0);
  EXPECT_THROW(SampleRealization(noise, cloud, 0), DomainError);
}

TEST(SampleRealizationTest, TopPointVarianceMatchesSigmaSquared) {
  const Scene scene = GenerateScene(SceneSpec{Layout::kSingle, 1.0, 100, 1.0, 7});
  const NoiseModel noise;
  const std::size_t top = TopPoint(scene, scene.plants[0]);
  const int n = 10000;
  double sum = 0.0, sum_sq = 0.0;
  for (int id = 0; id < n; ++id) {
    const double v = SampleRealization(noise, scene, id).offsets[top].dot(noise.direction);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1);
  const double sigma2 = noise.sigma * noise.sigma;
  EXPECT_NEAR(sigma2, 0.005, 1e-15);
  EXPECT_LT(std::abs(var / sigma2 - 1.0), 0.05);
}

TEST(ApplyNoiseTest, Examples) {
  const PointCloud one({Point3(0, 0, 1)});
  NoiseRealization r;
  r.offsets = {Vector3(0.003, 0, 0)};
  EXPECT_EQ(ApplyNoise(one, r)[0], Point3(0.003, 0, 1));

  NoiseRealization zero;
  zero.offsets = {Vector3::Zero()};
  EXPECT_EQ(ApplyNoise(one, zero).points(), one.points());

  NoiseRealization two;
  two.offsets = {Vector3::Zero(), Vector3::Zero()};
  EXPECT_THROW(ApplyNoise(one, two), DomainError);
}

TEST(ApplyNoiseTest, InverseRealizationRestoresCloud) {
  const Scene scene = GenerateScene(SceneSpec{Layout::kGrid9, 1.0, 50, 1.0, 7});
  NoiseModel noise;
  noise.sigma = 0.4;
  const NoiseRealization r = SampleRealization(noise, scene, 13);
  NoiseRealization neg = r;
  for (Vector3& o : neg.offsets) o = -o;
  const PointCloud back = ApplyNoise(ApplyNoise(scene.cloud, r), neg);
  ASSERT_EQ(back.size(), scene.cloud.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    ASSERT_LT((back[k] - scene.cloud[k]).norm(), 1e-12);
  }
}

}  // namespace
}  // namespace viewplan
