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

#ifndef VIEWPLAN_ACQUISITION_H_
#define VIEWPLAN_ACQUISITION_H_

#include <cstdint>

#include <Eigen/Core>

#include "viewplan/gp.h"

namespace viewplan {

inline constexpr double kSigmaFloor = 1e-12;

double NormalPdf(double x);
double NormalCdf(double x);

// Closed-form Gaussian expected improvement for a posterior whose mean exceeds
// the incumbent by `delta` with standard deviation `sigma`. Falls back to the
// sigma -> 0 limit max(delta, 0) at or below kSigmaFloor.
double ExpectedImprovement(double delta, double sigma);

// Model plus incumbent (the best raw observation).
struct EiState {
  const GpModel* model = nullptr;
  double incumbent = 0.0;

  static EiState FromModel(const GpModel& model);
};

double EiValue(const EiState& state, const Eigen::Ref<const Eigen::VectorXd>& z);

struct EiSearchOptions {
  int budget = 2048;            // quasi-random candidates
  int num_refine = 5;           // candidates handed to pattern search
  double initial_step = 0.05;
  double min_step = 1e-4;
  int max_evals_per_start = 3000;
};

struct EiSearchResult {
  Eigen::VectorXd point;
  double ei = 0.0;
  int evaluations = 0;
};

// Maximizes EI over the unit cube of the model's input dimension: a shifted
// Sobol sweep of `budget` points plus the best training input, followed by
// coordinate pattern search from the top candidates. Deterministic in `seed`;
// ties go to the lowest candidate index.
EiSearchResult MaximizeEi(const EiState& state, const EiSearchOptions& options,
                          std::uint64_t seed);

}  // namespace viewplan

#endif  // VIEWPLAN_ACQUISITION_H_
