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

#include "viewplan/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "viewplan/errors.h"

namespace viewplan {

void CheckFinite(const Point3& p, const char* what) {
  if (!p.allFinite()) {
    throw DomainError(std::string(what) + " has a non-finite component");
  }
}

CameraPose::CameraPose(const Point3& position, const Vector3& orientation)
    : position_(position) {
  CheckFinite(position, "camera position");
  CheckFinite(orientation, "camera orientation");
  const double norm = orientation.norm();
  if (!(norm > 0.0)) {
    throw DomainError("camera orientation must have positive norm");
  }
  orientation_ = orientation / norm;
}

Vector3 CameraPose::DirectionFromAngles(double azimuth, double elevation) {
  const double ce = std::cos(elevation);
  return {ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation)};
}

double CameraPose::Azimuth() const {
  double az = std::atan2(orientation_.y(), orientation_.x());
  if (az < 0.0) az += 2.0 * kPi;
  // atan2 can return exactly -0.0 or round up to 2*pi after the shift.
  if (az >= 2.0 * kPi) az = 0.0;
  return az;
}

double CameraPose::Elevation() const {
  return std::asin(std::clamp(orientation_.z(), -1.0, 1.0));
}

Placement::Placement(std::vector<CameraPose> cameras)
    : cameras_(std::move(cameras)) {
  if (cameras_.size() < 2) {
    throw DomainError("a placement needs at least two cameras");
  }
}

void SearchSpace::Validate() const {
  CheckFinite(lower, "search space lower bound");
  CheckFinite(upper, "search space upper bound");
  if (!(lower.array() < upper.array()).all()) {
    throw DomainError("search space requires lower < upper componentwise");
  }
}

bool SearchSpace::Contains(const Point3& p) const {
  return (p.array() >= lower.array()).all() &&
         (p.array() <= upper.array()).all();
}

Eigen::VectorXd Encode(const Placement& placement, const SearchSpace& space) {
  space.Validate();
  const Eigen::Index n = static_cast<Eigen::Index>(placement.size());
  Eigen::VectorXd out(kCoordsPerCamera * n);
  const Point3 extent = space.upper - space.lower;
  for (Eigen::Index i = 0; i < n; ++i) {
    const CameraPose& cam = placement[static_cast<std::size_t>(i)];
    if (!space.Contains(cam.position())) {
      throw DomainError("camera " + std::to_string(i) +
                        " lies outside the search space");
    }
    auto block = out.segment<kCoordsPerCamera>(kCoordsPerCamera * i);
    block.head<3>() =
        (cam.position() - space.lower).cwiseQuotient(extent);
    block[3] = cam.Azimuth() / (2.0 * kPi);
    block[4] = (cam.Elevation() + 0.5 * kPi) / kPi;
  }
  return out;
}

Placement Decode(const Eigen::Ref<const Eigen::VectorXd>& unit,
                 const SearchSpace& space) {
  space.Validate();
  if (unit.size() % kCoordsPerCamera != 0 ||
      unit.size() < 2 * kCoordsPerCamera) {
    throw DomainError("encoded placement must have length 5N with N >= 2, got " +
                      std::to_string(unit.size()));
  }
  if (!unit.allFinite() || (unit.array() < 0.0).any() ||
      (unit.array() > 1.0).any()) {
    throw DomainError("encoded placement entries must lie in [0, 1]");
  }
  const Point3 extent = space.upper - space.lower;
  std::vector<CameraPose> cameras;
  cameras.reserve(static_cast<std::size_t>(unit.size() / kCoordsPerCamera));
  for (Eigen::Index i = 0; i < unit.size(); i += kCoordsPerCamera) {
    // Clamp absorbs the one-ulp overshoot of lower + 1 * (upper - lower).
    const Point3 pos = (space.lower + unit.segment<3>(i).cwiseProduct(extent))
                           .cwiseMax(space.lower)
                           .cwiseMin(space.upper);
    const double az = unit[i + 3] * 2.0 * kPi;
    const double el = unit[i + 4] * kPi - 0.5 * kPi;
    cameras.emplace_back(pos, CameraPose::DirectionFromAngles(az, el));
  }
  return Placement(std::move(cameras));
}

double AngleCosine(const Vector3& a, const Vector3& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw DomainError("angle cosine of a zero vector is undefined");
  }
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

}  // namespace viewplan
