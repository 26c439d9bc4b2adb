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

#include <random>

#include <benchmark/benchmark.h>

#include "viewplan/acquisition.h"
#include "viewplan/gp.h"
#include "viewplan/planner.h"
#include "viewplan/reward.h"
#include "viewplan/scene.h"

namespace viewplan {
namespace {

Eigen::MatrixXd Uniform(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&] { return unit(rng); });
}

GpModel Model(Eigen::Index t, Eigen::Index d) {
  const Eigen::MatrixXd x = Uniform(t, d, 1);
  const Eigen::VectorXd y = x.rowwise().sum().array().sin();
  KernelSpec k;
  k.lengthscales = Eigen::VectorXd::Constant(1, 0.4);
  return GpModel(k, 1e-4, x, y, OutputTransform::Standardize(y));
}

void BM_Reward(benchmark::State& state) {
  SceneSpec spec;
  spec.layout = Layout::kGrid9;
  spec.points_per_plant = 200;
  const Scene scene = GenerateScene(spec);
  const Point3 c = scene.cloud.Centroid();
  const Placement z = CircularPlacement(c, 3.0, 1.5, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Reward(z, scene.cloud, RewardParams{}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(scene.cloud.size()));
}
BENCHMARK(BM_Reward)->Arg(4)->Arg(6);

void BM_Posterior(benchmark::State& state) {
  const GpModel gp = Model(state.range(0), 30);
  const Eigen::MatrixXd z = Uniform(2048, 30, 2);
  Eigen::VectorXd mean, var;
  for (auto _ : state) {
    gp.PredictBatch(z, &mean, &var);
    benchmark::DoNotOptimize(mean.data());
  }
  state.SetItemsProcessed(state.iterations() * z.rows());
}
BENCHMARK(BM_Posterior)->Arg(50)->Arg(250);

void BM_WithObservation(benchmark::State& state) {
  const GpModel gp = Model(state.range(0), 30);
  const Eigen::VectorXd z = Uniform(1, 30, 3).row(0).transpose();
  for (auto _ : state) benchmark::DoNotOptimize(gp.WithObservation(z, 0.5).size());
}
BENCHMARK(BM_WithObservation)->Arg(50)->Arg(249);

void BM_MaximizeEi(benchmark::State& state) {
  const GpModel gp = Model(state.range(0), 20);
  const EiState ei = EiState::FromModel(gp);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(MaximizeEi(ei, EiSearchOptions{}, seed++).ei);
  }
}
BENCHMARK(BM_MaximizeEi)->Arg(50)->Arg(250)->Unit(benchmark::kMillisecond);

void BM_FitGp(benchmark::State& state) {
  const Eigen::MatrixXd x = Uniform(50, 20, 4);
  const Eigen::VectorXd y = x.rowwise().sum().array().sin();
  for (auto _ : state) {
    benchmark::DoNotOptimize(FitGp(KernelFamily::kMatern25, x, y).log_likelihood);
  }
}
BENCHMARK(BM_FitGp)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace viewplan

BENCHMARK_MAIN();
