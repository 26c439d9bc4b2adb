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

#ifndef VIEWPLAN_GEOMETRY_H_
#define VIEWPLAN_GEOMETRY_H_

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace viewplan {

inline constexpr double kPi = std::numbers::pi;

using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;

// Throws DomainError when any component is NaN or infinite.
void CheckFinite(const Point3& p, const char* what);

// Pose of a single camera. `orientation` is the viewing direction (from the
// camera toward the scene) and is always stored with unit norm.
class CameraPose {
 public:
  CameraPose(const Point3& position, const Vector3& orientation);

  const Point3& position() const { return position_; }
  const Vector3& orientation() const { return orientation_; }

  // Builds the unit viewing direction from spherical angles.
  static Vector3 DirectionFromAngles(double azimuth, double elevation);

  // Azimuth in [0, 2*pi), elevation in [-pi/2, pi/2] of the orientation.
  double Azimuth() const;
  double Elevation() const;

 private:
  Point3 position_;
  Vector3 orientation_;
};

// Ordered set of N >= 2 cameras.
class Placement {
 public:
  explicit Placement(std::vector<CameraPose> cameras);

  std::size_t size() const { return cameras_.size(); }
  const CameraPose& operator[](std::size_t i) const { return cameras_[i]; }
  const std::vector<CameraPose>& cameras() const { return cameras_; }
  auto begin() const { return cameras_.begin(); }
  auto end() const { return cameras_.end(); }

 private:
  std::vector<CameraPose> cameras_;
};

// Feasible set for the optimizer: an axis-aligned position box and the full
// azimuth/elevation range for every camera.
struct SearchSpace {
  Point3 lower = Point3::Constant(-1.0);
  Point3 upper = Point3::Constant(1.0);

  void Validate() const;
  bool Contains(const Point3& p) const;
  Point3 Center() const { return 0.5 * (lower + upper); }
};

inline constexpr int kCoordsPerCamera = 5;

// Maps a placement to per-camera [x, y, z, azimuth, elevation] rescaled to
// the unit cube. Throws DomainError for positions outside the box.
Eigen::VectorXd Encode(const Placement& placement, const SearchSpace& space);

// Inverse of Encode. The vector length must be 5N with N >= 2 and all entries
// in [0, 1].
Placement Decode(const Eigen::Ref<const Eigen::VectorXd>& unit,
                 const SearchSpace& space);

// a.b / (|a||b|) clamped to [-1, 1]. Throws DomainError on a zero vector.
double AngleCosine(const Vector3& a, const Vector3& b);

}  // namespace viewplan

#endif  // VIEWPLAN_GEOMETRY_H_
