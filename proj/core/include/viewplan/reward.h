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

#ifndef VIEWPLAN_REWARD_H_
#define VIEWPLAN_REWARD_H_

#include <cstddef>
#include <vector>

#include "viewplan/geometry.h"

namespace viewplan {

// Camera model parameters. Defaults are a 90 degree field of view and a
// 45 degree maximum ray separation for feature matching.
struct RewardParams {
  double fov = kPi / 2.0;
  double theta_match = kPi / 4.0;

  // Requires 0 < fov < 2*pi and 0 < theta_match < pi/2.
  void Validate() const;
};

// Ordered, non-empty list of finite points.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point3>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  Point3 Centroid() const;
  // Axis-aligned bounds; both are zero for an empty cloud.
  Point3 Min() const;
  Point3 Max() const;

 private:
  std::vector<Point3> points_;
};

// Triangulation quality of p seen from two camera centres: the sine of the
// angle between the rays (ci - p) and (cj - p).
double PairQuality(const Point3& ci, const Point3& cj, const Point3& p);

// Field-of-view test exactly as cos(angle(c - p, v)) - cos(fov / 2) >= 0,
// where v points from the scene toward the camera.
bool FovConditionLiteral(const Point3& c, const Vector3& v, const Point3& p,
                         double fov);

// Field-of-view test for a pose whose orientation is the viewing direction.
bool FovCondition(const CameraPose& cam, const Point3& p,
                  const RewardParams& params);

// True iff the rays (ci - p) and (cj - p) are at most theta_match apart.
bool MatchCondition(const Point3& ci, const Point3& cj, const Point3& p,
                    const RewardParams& params);

// Product of both FoV indicators and the match indicator; 0 or 1.
int PairVisibility(const CameraPose& cami, const CameraPose& camj,
                   const Point3& p, const RewardParams& params);

// Mean of PairQuality * PairVisibility over all points and unordered camera
// pairs. The result lies in [0, 1].
//
// The point sum is accumulated in fixed-size blocks whose partial sums are
// added in block order, so any `threads` value produces bit-identical output.
double Reward(const Placement& placement, const PointCloud& cloud,
              const RewardParams& params, int threads = 1);

// Same computation as Reward on a perturbed cloud.
double NoisyReward(const Placement& placement, const PointCloud& noisy_cloud,
                   const RewardParams& params, int threads = 1);

}  // namespace viewplan

#endif  // VIEWPLAN_REWARD_H_
