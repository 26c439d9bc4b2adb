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

#ifndef VIEWPLAN_PLANNER_H_
#define VIEWPLAN_PLANNER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "viewplan/acquisition.h"
#include "viewplan/geometry.h"
#include "viewplan/gp.h"
#include "viewplan/reward.h"
#include "viewplan/scene.h"

namespace viewplan {

// SplitMix64 finalizer over (base, stream); used for every derived seed.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

struct BoConfig {
  int n_cameras = 4;
  int n_init = 50;
  int n_iters = 200;
  KernelFamily kernel = KernelFamily::kMatern25;
  RewardParams reward;
  SearchSpace space;
  std::uint64_t seed = 0;
  EiSearchOptions ei;
  FitOptions fit;
  // Refit hyperparameters every k BO iterations; 0 keeps the initial fit.
  int refit_every = 0;
  // Reference optimum of the simple regret.
  double optimum = 1.0;

  void Validate() const;
  int Dimension() const { return kCoordsPerCamera * n_cameras; }
};

// Black-box reward of a placement. `evaluation` is the 0-based query index,
// which only matters for objectives that redraw noise per query.
using Objective = std::function<double(const Placement&, std::int64_t evaluation)>;

// r~ on one frozen noisy cloud.
Objective FrozenNoiseObjective(PointCloud noisy_cloud, RewardParams params);

// r~ with a fresh noise realization (id = evaluation index) per query.
Objective ResampledNoiseObjective(Scene scene, NoiseModel noise,
                                  RewardParams params);

struct Observation {
  Eigen::VectorXd z;  // unit-cube encoding
  double value = 0.0;
};

// n_init uniform draws on the unit cube, each evaluated once. A draw whose
// evaluation raises DomainError is redrawn up to 100 times.
std::vector<Observation> InitDesign(const BoConfig& config,
                                    const Objective& objective);

// optimum - running_max. Negative values are returned unchanged.
double SimpleRegret(double running_max, double optimum = 1.0);

struct TraceRecord {
  int iteration = 0;  // 1-based observation index
  Eigen::VectorXd z;
  double observed = 0.0;
  double running_best = 0.0;
  double simple_regret = 0.0;
};

struct RegretTrace {
  std::string scene;
  std::int64_t realization = 0;
  KernelFamily kernel = KernelFamily::kMatern25;
  std::uint64_t seed = 0;
  int n_init = 0;
  std::vector<TraceRecord> records;
  bool incomplete = false;
  std::string error;
  // Hyperparameters used for the BO iterations.
  std::optional<KernelSpec> fitted_kernel;
  double noise_variance = 0.0;

  double BestValue() const;
  double FinalRegret() const;
  const TraceRecord& BestRecord() const;
};

// Fits the GP on the initial design, freezes the hyperparameters and runs
// n_iters rounds of EI maximization. Numerical failures end the run early
// with `incomplete` set.
RegretTrace RunBo(const BoConfig& config, const Objective& objective);
RegretTrace RunBo(const BoConfig& config, const PointCloud& noisy_cloud);

struct CircularCandidate {
  double radius = 0.0;
  double height = 0.0;
  Placement placement;
  double value = 0.0;
};

struct BaselineResult {
  std::vector<CircularCandidate> candidates;
  std::size_t best_index = 0;

  const CircularCandidate& best() const { return candidates[best_index]; }
  double best_value() const { return best().value; }
  std::vector<double> values() const;
};

// n cameras equally spaced on the horizontal circle of `radius` around
// `center` at height `height`, all looking at `center`.
Placement CircularPlacement(const Point3& center, double radius, double height,
                            int n);

// Best of `n_candidates` circular formations centred on the cloud centroid,
// with radius and height drawn uniformly; circles leaving the search box are
// redrawn.
BaselineResult CircularBaseline(const BoConfig& config, const PointCloud& cloud,
                                int n_candidates, std::uint64_t seed);

// Box around the scene: its footprint grown by `margin` on every side, and
// heights from the ground to `top_margin` above the tallest point.
SearchSpace DefaultSearchSpace(const PointCloud& cloud, double margin = 1.5,
                               double top_margin = 0.5);

struct ExperimentConfig {
  SceneSpec scene;
  NoiseModel noise;
  BoConfig bo;
  std::vector<KernelFamily> kernels = {KernelFamily::kRbf, KernelFamily::kArdRbf,
                                       KernelFamily::kMatern25,
                                       KernelFamily::kMatern15};
  int n_realizations = 5;
  int n_candidates = 50;
  std::uint64_t master_seed = 0;
  bool resample_noise = false;
  int threads = 1;

  void Validate() const;
};

inline constexpr const char* kBaselineMethod = "baseline";

struct ExperimentCell {
  std::string method;  // kernel name or "baseline"
  int realization = 0;
  std::optional<RegretTrace> trace;
  std::optional<BaselineResult> baseline;
  std::string error;

  bool ok() const { return error.empty(); }
  double FinalRegret(double optimum) const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentCell> cells;

  // Mean over realizations of SR at each 1-based observation index; cells
  // that failed are skipped. Empty when no cell of `method` succeeded.
  std::vector<double> MeanRegretCurve(const std::string& method) const;
  // Mean over realizations of the best-of-candidates baseline regret.
  double MeanBaselineRegret() const;
};

// Runs every (realization x method) cell. Cells are independent and executed
// on up to config.threads workers; results do not depend on thread count.
ExperimentReport RunExperiment(const ExperimentConfig& config);

}  // namespace viewplan

#endif  // VIEWPLAN_PLANNER_H_
