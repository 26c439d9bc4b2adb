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

#include "viewplan/acquisition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <boost/random/sobol.hpp>

#include "viewplan/errors.h"

namespace viewplan {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kInvSqrt2 = 0.7071067811865476;

// Sobol points with a seeded Cranley-Patterson rotation.
Eigen::MatrixXd ShiftedSobol(Eigen::Index dim, int count, std::uint64_t seed) {
  boost::random::sobol engine(static_cast<std::size_t>(dim));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd shift(dim);
  for (Eigen::Index k = 0; k < dim; ++k) shift[k] = unit(rng);

  constexpr double kScale = 0x1p-64;
  Eigen::MatrixXd out(count, dim);
  for (int i = 0; i < count; ++i) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      double u = static_cast<double>(engine()) * kScale + shift[k];
      u -= std::floor(u);
      out(i, k) = u;
    }
  }
  return out;
}

struct Scored {
  Eigen::VectorXd point;
  double ei;
};

Scored PatternSearch(const EiState& state, Scored start,
                     const EiSearchOptions& options, int* evaluations) {
  Eigen::VectorXd x = std::move(start.point);
  double best = start.ei;
  int evals = 0;
  for (double step = options.initial_step;
       step >= options.min_step && evals < options.max_evals_per_start;) {
    bool improved = false;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double origin = x[k];
      for (double sign : {1.0, -1.0}) {
        const double trial = std::clamp(origin + sign * step, 0.0, 1.0);
        if (trial == origin) continue;
        x[k] = trial;
        const double v = EiValue(state, x);
        ++evals;
        if (v > best) {
          best = v;
          improved = true;
          break;
        }
        x[k] = origin;
      }
      if (evals >= options.max_evals_per_start) break;
    }
    if (!improved) step *= 0.5;
  }
  *evaluations += evals;
  return {x, best};
}

}  // namespace

double NormalPdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double NormalCdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double ExpectedImprovement(double delta, double sigma) {
  if (!(sigma > kSigmaFloor)) return std::max(delta, 0.0);
  const double u = delta / sigma;
  return std::max(0.0, delta * NormalCdf(u) + sigma * NormalPdf(u));
}

EiState EiState::FromModel(const GpModel& model) {
  return {&model, model.outputs().maxCoeff()};
}

double EiValue(const EiState& state,
               const Eigen::Ref<const Eigen::VectorXd>& z) {
  const Posterior post = state.model->Predict(z);
  return ExpectedImprovement(post.mean - state.incumbent,
                             std::sqrt(post.variance));
}

EiSearchResult MaximizeEi(const EiState& state, const EiSearchOptions& options,
                          std::uint64_t seed) {
  if (state.model == nullptr) throw DomainError("EI state has no model");
  if (options.budget < 1) throw DomainError("EI budget must be >= 1");
  const GpModel& model = *state.model;
  const Eigen::Index dim = model.dimension();

  Eigen::MatrixXd candidates(options.budget + 1, dim);
  candidates.topRows(options.budget) = ShiftedSobol(dim, options.budget, seed);
  Eigen::Index best_train = 0;
  model.outputs().maxCoeff(&best_train);
  candidates.row(options.budget) = model.inputs().row(best_train);

  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
  model.PredictBatch(candidates, &mean, &variance);
  std::vector<double> ei(static_cast<std::size_t>(candidates.rows()));
  for (Eigen::Index i = 0; i < candidates.rows(); ++i) {
    ei[static_cast<std::size_t>(i)] = ExpectedImprovement(
        mean[i] - state.incumbent, std::sqrt(variance[i]));
  }

  std::vector<std::size_t> order(ei.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ei[a] > ei[b]; });

  EiSearchResult result;
  result.evaluations = static_cast<int>(candidates.rows());
  result.point = candidates.row(static_cast<Eigen::Index>(order[0])).transpose();
  result.ei = ei[order[0]];

  const std::size_t refine =
      std::min(order.size(), static_cast<std::size_t>(std::max(0, options.num_refine)));
  for (std::size_t r = 0; r < refine; ++r) {
    const auto idx = static_cast<Eigen::Index>(order[r]);
    Scored refined = PatternSearch(
        state, {candidates.row(idx).transpose(), ei[order[r]]}, options,
        &result.evaluations);
    if (refined.ei > result.ei) {
      result.ei = refined.ei;
      result.point = std::move(refined.point);
    }
  }
  return result;
}

}  // namespace viewplan
