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

#include "viewplan/reward.h"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "oracles.h"
#include "viewplan/errors.h"
#include "viewplan/scene.h"

namespace viewplan {
namespace {

// Camera at `pos` looking at `target`.
CameraPose LookAt(const Point3& pos, const Point3& target) {
  return CameraPose(pos, target - pos);
}

struct Instance {
  std::vector<CameraPose> cams;
  std::vector<Point3> points;

  Placement placement() const { return Placement(cams); }
  PointCloud cloud() const { return PointCloud(points); }
  std::vector<Point3> positions() const {
    std::vector<Point3> out;
    for (const auto& c : cams) out.push_back(c.position());
    return out;
  }
  std::vector<Vector3> dirs() const {
    std::vector<Vector3> out;
    for (const auto& c : cams) out.push_back(c.orientation());
    return out;
  }
};

// Small random instances with cameras roughly aimed at the cloud so that a
// good share of (point, pair) terms are non-zero.
Instance RandomInstance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> ncam(2, 4);
  std::uniform_int_distribution<int> npts(1, 20);
  std::uniform_real_distribution<double> box(-2.0, 2.0);
  std::uniform_real_distribution<double> local(-0.5, 0.5);
  std::normal_distribution<double> aim(0.0, 0.35);
  Instance inst;
  const int n = ncam(rng);
  for (int i = 0; i < n; ++i) {
    Point3 pos(box(rng), box(rng), box(rng));
    while (pos.norm() < 1.0) pos *= 1.5;
    const Point3 target(aim(rng), aim(rng), aim(rng));
    inst.cams.push_back(LookAt(pos, target));
  }
  const int p = npts(rng);
  for (int k = 0; k < p; ++k) inst.points.emplace_back(local(rng), local(rng), local(rng));
  return inst;
}

TEST(PairQualityTest, AnalyticValues) {
  const Point3 p = Point3::Zero();
  EXPECT_DOUBLE_EQ(PairQuality(Point3(1, 0, 0), Point3(0, 1, 0), p), 1.0);
  EXPECT_DOUBLE_EQ(PairQuality(Point3(1, 0, 0), Point3(2, 0, 0), p), 0.0);
  EXPECT_NEAR(PairQuality(Point3(1, 0, 0), Point3(1, 1, 0), p),
              0.70710678118654752, 1e-15);
}

TEST(PairQualityTest, CoincidentCameraIsDomainError) {
  EXPECT_THROW(PairQuality(Point3::Zero(), Point3(1, 0, 0), Point3::Zero()),
               DomainError);
}

TEST(FovConditionTest, LiteralInequalityExamples) {
  const double fov = kPi / 2;
  // v = (-1, 0, 0) points from the scene back to the camera.
  EXPECT_TRUE(FovConditionLiteral(Point3::Zero(), Vector3(-1, 0, 0),
                                  Point3(1, 0, 0), fov));
  EXPECT_FALSE(FovConditionLiteral(Point3::Zero(), Vector3(-1, 0, 0),
                                   Point3(1, 1.01 * std::tan(kPi / 4), 0), fov));
}

TEST(FovConditionTest, PoseLookingAtPointSeesIt) {
  RewardParams params;
  const CameraPose cam(Point3::Zero(), Vector3(1, 0, 0));
  EXPECT_TRUE(FovCondition(cam, Point3(1, 0, 0), params));
  EXPECT_FALSE(FovCondition(cam, Point3(1, 1.01, 0), params));
  EXPECT_FALSE(FovCondition(cam, Point3(-1, 0, 0), params));
}

TEST(FovConditionTest, BoundaryIsInclusive) {
  // 3-4-5 triangle: the cosine is exactly 0.6 on both sides.
  RewardParams params;
  params.fov = 2.0 * std::acos(0.6);
  ASSERT_EQ(std::cos(0.5 * params.fov), 0.6);
  const CameraPose cam(Point3::Zero(), Vector3(1, 0, 0));
  EXPECT_TRUE(FovCondition(cam, Point3(3, 4, 0), params));
  EXPECT_FALSE(FovCondition(cam, Point3(3, 4.001, 0), params));
}

TEST(FovConditionTest, CoincidentIsDomainError) {
  EXPECT_THROW(FovCondition(CameraPose(Point3::Zero(), Vector3::UnitX()),
                            Point3::Zero(), RewardParams{}),
               DomainError);
}

TEST(MatchConditionTest, Examples) {
  RewardParams params;
  const Point3 p = Point3::Zero();
  EXPECT_FALSE(MatchCondition(Point3(1, 0, 0), Point3(0, 1, 0), p, params));
  EXPECT_TRUE(MatchCondition(Point3(1, 0, 0), Point3(1, 0.1, 0), p, params));
  EXPECT_TRUE(MatchCondition(Point3(1, 2, 3), Point3(1, 2, 3), p, params));
}

TEST(MatchConditionTest, BoundaryIsInclusive) {
  RewardParams params;
  params.theta_match = std::acos(0.6);
  ASSERT_EQ(std::cos(params.theta_match), 0.6);
  EXPECT_TRUE(MatchCondition(Point3(5, 0, 0), Point3(3, 4, 0), Point3::Zero(), params));
}

TEST(PairVisibilityTest, Examples) {
  RewardParams params;
  const Point3 p = Point3::Zero();
  const double a = 10.0 * kPi / 180.0;
  const CameraPose ci = LookAt(Point3(2, 0, 0), p);
  const CameraPose cj = LookAt(Point3(2 * std::cos(a), 2 * std::sin(a), 0), p);
  EXPECT_EQ(PairVisibility(ci, cj, p, params), 1);
  EXPECT_EQ(PairVisibility(ci, cj, p, params), PairVisibility(cj, ci, p, params));

  const CameraPose away(Point3(2, 0, 0), Vector3(1, 0, 0));
  EXPECT_EQ(PairVisibility(away, cj, p, params), 0);

  const CameraPose ortho = LookAt(Point3(0, 2, 0), p);
  EXPECT_EQ(PairVisibility(ci, ortho, p, params), 0);
}

TEST(RewardTest, NothingSeenIsZero) {
  const Placement z({CameraPose(Point3(2, 0, 0), Vector3(1, 0, 0)),
                     CameraPose(Point3(0, 2, 0), Vector3(0, 1, 0))});
  EXPECT_EQ(Reward(z, PointCloud({Point3::Zero()}), RewardParams{}), 0.0);
}

TEST(RewardTest, SingleTermEqualsPairQuality) {
  const Point3 p(0.1, -0.2, 0.3);
  const double a = kPi / 6;
  const Point3 ci = p + Point3(2, 0, 0);
  const Point3 cj = p + Point3(2 * std::cos(a), 2 * std::sin(a), 0);
  const Placement z({LookAt(ci, p), LookAt(cj, p)});
  EXPECT_EQ(Reward(z, PointCloud({p}), RewardParams{}), PairQuality(ci, cj, p));
  EXPECT_NEAR(Reward(z, PointCloud({p}), RewardParams{}), 0.5, 1e-15);
}

TEST(RewardTest, ThreeCamerasTwoPointsFrozen) {
  // Frozen from an independent NumPy evaluation of the same double sum.
  const Point3 target(0, 0, 0.5);
  Instance inst;
  inst.cams = {LookAt(Point3(2, 0, 1), target), LookAt(Point3(2, 0.8, 1.2), target),
               LookAt(Point3(1.8, -0.6, 0.7), target)};
  inst.points = {Point3(0, 0, 0.5), Point3(0.1, 0.2, 0.6)};
  const double r = Reward(inst.placement(), inst.cloud(), RewardParams{});
  EXPECT_NEAR(r, 0.46809091140478193, 1e-14);
  EXPECT_NEAR(r,
              testing::BruteForceReward(inst.positions(), inst.dirs(), inst.points,
                                        kPi / 2, kPi / 4),
              1e-12);
}

TEST(RewardTest, CoincidentCameraIsDomainError) {
  const Placement z({CameraPose(Point3::Zero(), Vector3::UnitX()),
                     CameraPose(Point3(1, 0, 0), Vector3::UnitX())});
  EXPECT_THROW(Reward(z, PointCloud({Point3::Zero()}), RewardParams{}), DomainError);
}

TEST(RewardTest, EmptyCloudIsDomainError) {
  const Placement z({CameraPose(Point3(1, 0, 0), Vector3::UnitX()),
                     CameraPose(Point3(2, 0, 0), Vector3::UnitX())});
  EXPECT_THROW(Reward(z, PointCloud(), RewardParams{}), DomainError);
}

TEST(RewardTest, InvalidParamsAreDomainError) {
  const Placement z({CameraPose(Point3(1, 0, 0), Vector3::UnitX()),
                     CameraPose(Point3(2, 0, 0), Vector3::UnitX())});
  RewardParams bad;
  bad.theta_match = kPi / 2;
  EXPECT_THROW(Reward(z, PointCloud({Point3::Zero()}), bad), DomainError);
}

TEST(RewardTest, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> local(-0.5, 0.5);
  std::vector<Point3> pts;
  for (int k = 0; k < 1000; ++k) pts.emplace_back(local(rng), local(rng), local(rng));
  const PointCloud cloud(pts);
  const Placement z({LookAt(Point3(3, 0, 1), Point3::Zero()),
                     LookAt(Point3(3, 1, 1.5), Point3::Zero()),
                     LookAt(Point3(2.5, -1, 1), Point3::Zero())});
  const double serial = Reward(z, cloud, RewardParams{}, 1);
  EXPECT_GT(serial, 0.0);
  for (int t : {2, 3, 8}) EXPECT_EQ(Reward(z, cloud, RewardParams{}, t), serial);
}

TEST(RewardProperty, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  int nonzero = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = RandomInstance(rng);
    const double r = Reward(inst.placement(), inst.cloud(), RewardParams{});
    const double oracle = testing::BruteForceReward(
        inst.positions(), inst.dirs(), inst.points, kPi / 2, kPi / 4);
    ASSERT_NEAR(r, oracle, 1e-12) << "trial " << trial;
    nonzero += r > 0.0;
  }
  EXPECT_GT(nonzero, 50);
}

TEST(RewardProperty, RangePermutationRigidAndMonotone) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 500; ++trial) {
    Instance inst = RandomInstance(rng);
    const RewardParams params;
    const double r = Reward(inst.placement(), inst.cloud(), params);
    ASSERT_GE(r, 0.0);
    ASSERT_LE(r, 1.0);

    Instance perm = inst;
    std::shuffle(perm.cams.begin(), perm.cams.end(), rng);
    std::shuffle(perm.points.begin(), perm.points.end(), rng);
    ASSERT_NEAR(Reward(perm.placement(), perm.cloud(), params), r, 1e-12);

    const Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(angle(rng), Vector3::UnitZ()) *
         Eigen::AngleAxisd(angle(rng), Vector3::UnitY()) *
         Eigen::AngleAxisd(angle(rng), Vector3::UnitX()))
            .toRotationMatrix();
    const Vector3 shift(angle(rng), angle(rng), angle(rng));
    Instance moved;
    for (const auto& c : inst.cams) {
      moved.cams.emplace_back(rot * c.position() + shift, rot * c.orientation());
    }
    for (const auto& p : inst.points) moved.points.push_back(rot * p + shift);
    ASSERT_NEAR(Reward(moved.placement(), moved.cloud(), params), r, 1e-12);

    RewardParams wider = params;
    wider.fov = params.fov * 1.3;
    RewardParams looser = params;
    looser.theta_match = params.theta_match * 1.5;
    ASSERT_GE(Reward(inst.placement(), inst.cloud(), wider), r);
    ASSERT_GE(Reward(inst.placement(), inst.cloud(), looser), r);
  }
}

TEST(NoisyRewardTest, ZeroNoiseEqualsReward) {
  SceneSpec spec;
  spec.points_per_plant = 200;
  const Scene scene = GenerateScene(spec);
  NoiseModel zero;
  zero.sigma = 0.0;
  const PointCloud noisy = ApplyNoise(scene.cloud, SampleRealization(zero, scene, 3));
  const Placement z({LookAt(Point3(2, 0, 1), Point3(0, 0, 0.5)),
                     LookAt(Point3(2, 0.8, 1.2), Point3(0, 0, 0.5))});
  EXPECT_EQ(NoisyReward(z, noisy, RewardParams{}),
            Reward(z, scene.cloud, RewardParams{}));
}

TEST(NoisyRewardTest, RealizationsDiffer) {
  SceneSpec spec;
  spec.points_per_plant = 300;
  const Scene scene = GenerateScene(spec);
  NoiseModel noise;
  noise.sigma = 0.3;
  const Placement z({LookAt(Point3(1.2, 0, 1.4), Point3(0, 0, 0.6)),
                     LookAt(Point3(1.2, 0.5, 1.5), Point3(0, 0, 0.6)),
                     LookAt(Point3(1.0, -0.5, 1.2), Point3(0, 0, 0.6))});
  const double r0 = NoisyReward(
      z, ApplyNoise(scene.cloud, SampleRealization(noise, scene, 0)), RewardParams{});
  const double r1 = NoisyReward(
      z, ApplyNoise(scene.cloud, SampleRealization(noise, scene, 1)), RewardParams{});
  EXPECT_NE(r0, r1);
  EXPECT_GE(r0, 0.0);
  EXPECT_LE(r1, 1.0);
}

TEST(NoisyRewardTest, PointPushedOutOfViewScoresZero) {
  const Point3 p(0, 0, 0);
  const Placement z({LookAt(Point3(2, 0, 0), p), LookAt(Point3(2, 0.3, 0), p)});
  const PointCloud clean({p});
  ASSERT_GT(Reward(z, clean, RewardParams{}), 0.0);
  NoiseRealization push;
  push.offsets = {Vector3(0, 5, 0)};
  EXPECT_EQ(NoisyReward(z, ApplyNoise(clean, push), RewardParams{}), 0.0);
}

}  // namespace
}  // namespace viewplan
