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
#include <string>
#include <thread>

#include <Eigen/Geometry>

#include "viewplan/errors.h"

namespace viewplan {
namespace {

constexpr std::size_t kBlockSize = 64;

Vector3 Ray(const Point3& c, const Point3& p) {
  Vector3 d = c - p;
  if (d.isZero(0.0)) {
    throw DomainError("camera centre coincides with a scene point");
  }
  return d;
}

// Sum of f * g over all camera pairs for one point.
double PointTerm(const Placement& placement, const Point3& p,
                 const RewardParams& params, std::vector<char>& in_view) {
  const std::size_t n = placement.size();
  for (std::size_t i = 0; i < n; ++i) {
    in_view[i] = FovCondition(placement[i], p, params) ? 1 : 0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!in_view[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!in_view[j]) continue;
      const Point3& ci = placement[i].position();
      const Point3& cj = placement[j].position();
      if (MatchCondition(ci, cj, p, params)) {
        sum += PairQuality(ci, cj, p);
      }
    }
  }
  return sum;
}

double BlockSum(const Placement& placement, const PointCloud& cloud,
                const RewardParams& params, std::size_t block) {
  std::vector<char> in_view(placement.size());
  const std::size_t begin = block * kBlockSize;
  const std::size_t end = std::min(cloud.size(), begin + kBlockSize);
  double sum = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    sum += PointTerm(placement, cloud[k], params, in_view);
  }
  return sum;
}

}  // namespace

void RewardParams::Validate() const {
  if (!(fov > 0.0 && fov < 2.0 * kPi)) {
    throw DomainError("fov must lie in (0, 2*pi)");
  }
  if (!(theta_match > 0.0 && theta_match < 0.5 * kPi)) {
    throw DomainError("theta_match must lie in (0, pi/2)");
  }
}

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  for (const Point3& p : points_) CheckFinite(p, "point");
}

Point3 PointCloud::Centroid() const {
  Point3 sum = Point3::Zero();
  for (const Point3& p : points_) sum += p;
  return points_.empty() ? sum : Point3(sum / static_cast<double>(size()));
}

Point3 PointCloud::Min() const {
  if (points_.empty()) return Point3::Zero();
  Point3 m = points_.front();
  for (const Point3& p : points_) m = m.cwiseMin(p);
  return m;
}

Point3 PointCloud::Max() const {
  if (points_.empty()) return Point3::Zero();
  Point3 m = points_.front();
  for (const Point3& p : points_) m = m.cwiseMax(p);
  return m;
}

double PairQuality(const Point3& ci, const Point3& cj, const Point3& p) {
  const Vector3 a = Ray(ci, p);
  const Vector3 b = Ray(cj, p);
  const double s = a.cross(b).norm() / (a.norm() * b.norm());
  return std::min(s, 1.0);
}

bool FovConditionLiteral(const Point3& c, const Vector3& v, const Point3& p,
                         double fov) {
  return AngleCosine(Ray(c, p), v) - std::cos(0.5 * fov) >= 0.0;
}

bool FovCondition(const CameraPose& cam, const Point3& p,
                  const RewardParams& params) {
  return FovConditionLiteral(cam.position(), -cam.orientation(), p, params.fov);
}

bool MatchCondition(const Point3& ci, const Point3& cj, const Point3& p,
                    const RewardParams& params) {
  return AngleCosine(Ray(ci, p), Ray(cj, p)) - std::cos(params.theta_match) >=
         0.0;
}

int PairVisibility(const CameraPose& cami, const CameraPose& camj,
                   const Point3& p, const RewardParams& params) {
  const bool seen = FovCondition(cami, p, params) &&
                    FovCondition(camj, p, params) &&
                    MatchCondition(cami.position(), camj.position(), p, params);
  return seen ? 1 : 0;
}

double Reward(const Placement& placement, const PointCloud& cloud,
              const RewardParams& params, int threads) {
  params.Validate();
  if (cloud.empty()) throw DomainError("point cloud is empty");
  for (const CameraPose& cam : placement) {
    for (const Point3& p : cloud) Ray(cam.position(), p);
  }

  const std::size_t blocks = (cloud.size() + kBlockSize - 1) / kBlockSize;
  std::vector<double> partial(blocks, 0.0);
  const std::size_t workers =
      std::clamp<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1,
                              1, blocks);
  if (workers == 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      partial[b] = BlockSum(placement, cloud, params, b);
    }
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t b = w; b < blocks; b += workers) {
          partial[b] = BlockSum(placement, cloud, params, b);
        }
      });
    }
  }

  double total = 0.0;
  for (double s : partial) total += s;
  const double n = static_cast<double>(placement.size());
  const double pairs = n * (n - 1.0) / 2.0;
  return total / (static_cast<double>(cloud.size()) * pairs);
}

double NoisyReward(const Placement& placement, const PointCloud& noisy_cloud,
                   const RewardParams& params, int threads) {
  return Reward(placement, noisy_cloud, params, threads);
}

}  // namespace viewplan
