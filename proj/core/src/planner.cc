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

#include "viewplan/planner.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "viewplan/errors.h"

namespace viewplan {
namespace {

constexpr int kMaxRedraws = 100;
constexpr int kMaxBaselineAttempts = 100000;

Eigen::MatrixXd StackInputs(const std::vector<Observation>& obs) {
  Eigen::MatrixXd z(static_cast<Eigen::Index>(obs.size()), obs.front().z.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    z.row(static_cast<Eigen::Index>(i)) = obs[i].z.transpose();
  }
  return z;
}

Eigen::VectorXd StackOutputs(const std::vector<Observation>& obs) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = obs[i].value;
  }
  return y;
}

void Record(RegretTrace* trace, const Eigen::VectorXd& z, double value,
            double optimum) {
  const double prev = trace->records.empty()
                          ? -std::numeric_limits<double>::infinity()
                          : trace->records.back().running_best;
  TraceRecord r;
  r.iteration = static_cast<int>(trace->records.size()) + 1;
  r.z = z;
  r.observed = value;
  r.running_best = std::max(prev, value);
  r.simple_regret = SimpleRegret(r.running_best, optimum);
  trace->records.push_back(std::move(r));
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void BoConfig::Validate() const {
  if (n_cameras < 2) throw DomainError("n_cameras must be >= 2");
  if (n_init < 2) throw DomainError("n_init must be >= 2");
  if (n_iters < 0) throw DomainError("n_iters must be >= 0");
  reward.Validate();
  space.Validate();
}

Objective FrozenNoiseObjective(PointCloud noisy_cloud, RewardParams params) {
  return [cloud = std::move(noisy_cloud), params](const Placement& z,
                                                  std::int64_t) {
    return NoisyReward(z, cloud, params);
  };
}

Objective ResampledNoiseObjective(Scene scene, NoiseModel noise,
                                  RewardParams params) {
  return [scene = std::move(scene), noise, params](const Placement& z,
                                                   std::int64_t evaluation) {
    const NoiseRealization real = SampleRealization(noise, scene, evaluation);
    return NoisyReward(z, ApplyNoise(scene.cloud, real), params);
  };
}

std::vector<Observation> InitDesign(const BoConfig& config,
                                    const Objective& objective) {
  config.Validate();
  std::mt19937_64 rng(DeriveSeed(config.seed, 0x1D));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Observation> out;
  out.reserve(static_cast<std::size_t>(config.n_init));
  for (int i = 0; i < config.n_init; ++i) {
    for (int attempt = 0;; ++attempt) {
      Eigen::VectorXd z(config.Dimension());
      for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = unit(rng);
      try {
        const double v = objective(Decode(z, config.space),
                                   static_cast<std::int64_t>(out.size()));
        out.push_back({std::move(z), v});
        break;
      } catch (const DomainError&) {
        if (attempt + 1 >= kMaxRedraws) throw;
      }
    }
  }
  return out;
}

double SimpleRegret(double running_max, double optimum) {
  return optimum - running_max;
}

double RegretTrace::BestValue() const { return BestRecord().running_best; }

double RegretTrace::FinalRegret() const {
  if (records.empty()) throw DomainError("empty regret trace");
  return records.back().simple_regret;
}

const TraceRecord& RegretTrace::BestRecord() const {
  if (records.empty()) throw DomainError("empty regret trace");
  auto it = std::max_element(
      records.begin(), records.end(),
      [](const TraceRecord& a, const TraceRecord& b) { return a.observed < b.observed; });
  return *it;
}

RegretTrace RunBo(const BoConfig& config, const Objective& objective) {
  config.Validate();
  RegretTrace trace;
  trace.kernel = config.kernel;
  trace.seed = config.seed;
  trace.n_init = config.n_init;

  std::vector<Observation> data = InitDesign(config, objective);
  for (const Observation& o : data) Record(&trace, o.z, o.value, config.optimum);

  try {
    FitOptions fit = config.fit;
    fit.seed = DeriveSeed(config.seed, 0xF17);
    FitResult fitted = FitGp(config.kernel, StackInputs(data), StackOutputs(data), fit);
    trace.fitted_kernel = fitted.model.kernel();
    trace.noise_variance = fitted.model.noise_variance();
    GpModel model = std::move(fitted.model);

    for (int it = 0; it < config.n_iters; ++it) {
      if (it > 0 && config.refit_every > 0 && it % config.refit_every == 0) {
        fit.seed = DeriveSeed(config.seed, 0xF17 + static_cast<std::uint64_t>(it));
        fitted = FitGp(config.kernel, StackInputs(data), StackOutputs(data), fit);
        model = std::move(fitted.model);
        trace.fitted_kernel = model.kernel();
        trace.noise_variance = model.noise_variance();
      }
      const EiState state = EiState::FromModel(model);
      const EiSearchResult next = MaximizeEi(
          state, config.ei, DeriveSeed(config.seed, 0xE1000 + static_cast<std::uint64_t>(it)));
      const double value = objective(Decode(next.point, config.space),
                                     static_cast<std::int64_t>(data.size()));
      data.push_back({next.point, value});
      Record(&trace, next.point, value, config.optimum);
      model = model.WithObservation(next.point, value);
    }
  } catch (const std::exception& e) {
    trace.incomplete = true;
    trace.error = e.what();
  }
  return trace;
}

RegretTrace RunBo(const BoConfig& config, const PointCloud& noisy_cloud) {
  return RunBo(config, FrozenNoiseObjective(noisy_cloud, config.reward));
}

std::vector<double> BaselineResult::values() const {
  std::vector<double> out;
  out.reserve(candidates.size());
  for (const CircularCandidate& c : candidates) out.push_back(c.value);
  return out;
}

Placement CircularPlacement(const Point3& center, double radius, double height,
                            int n) {
  if (n < 2) throw DomainError("a circular formation needs at least 2 cameras");
  if (!(radius > 0.0)) throw DomainError("circle radius must be positive");
  std::vector<CameraPose> cams;
  cams.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    const Point3 pos(center.x() + radius * std::cos(a),
                     center.y() + radius * std::sin(a), height);
    cams.emplace_back(pos, center - pos);
  }
  return Placement(std::move(cams));
}

BaselineResult CircularBaseline(const BoConfig& config, const PointCloud& cloud,
                                int n_candidates, std::uint64_t seed) {
  config.Validate();
  if (n_candidates < 1) throw DomainError("n_candidates must be >= 1");
  if (cloud.empty()) throw DomainError("point cloud is empty");
  const Point3 center = cloud.Centroid();
  const SearchSpace& box = config.space;

  double r_max = 0.0;
  for (double x : {box.lower.x(), box.upper.x()}) {
    for (double y : {box.lower.y(), box.upper.y()}) {
      r_max = std::max(r_max, std::hypot(x - center.x(), y - center.y()));
    }
  }
  const double r_min = 0.05 * r_max;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius_dist(r_min, r_max);
  std::uniform_real_distribution<double> height_dist(box.lower.z(), box.upper.z());

  BaselineResult result;
  int attempts = 0;
  while (static_cast<int>(result.candidates.size()) < n_candidates) {
    if (++attempts > kMaxBaselineAttempts) {
      throw DomainError("could not place a circular formation inside the box");
    }
    const double radius = radius_dist(rng);
    const double height = height_dist(rng);
    Placement p = CircularPlacement(center, radius, height, config.n_cameras);
    if (!std::all_of(p.begin(), p.end(), [&](const CameraPose& c) {
          return box.Contains(c.position());
        })) {
      continue;
    }
    double value;
    try {
      value = NoisyReward(p, cloud, config.reward);
    } catch (const DomainError&) {
      continue;
    }
    result.candidates.push_back({radius, height, std::move(p), value});
  }
  for (std::size_t i = 1; i < result.candidates.size(); ++i) {
    if (result.candidates[i].value > result.candidates[result.best_index].value) {
      result.best_index = i;
    }
  }
  return result;
}

SearchSpace DefaultSearchSpace(const PointCloud& cloud, double margin,
                               double top_margin) {
  if (cloud.empty()) throw DomainError("point cloud is empty");
  SearchSpace s;
  const Point3 lo = cloud.Min();
  const Point3 hi = cloud.Max();
  s.lower = Point3(lo.x() - margin, lo.y() - margin, 0.0);
  s.upper = Point3(hi.x() + margin, hi.y() + margin, hi.z() + top_margin);
  s.Validate();
  return s;
}

void ExperimentConfig::Validate() const {
  scene.Validate();
  noise.Validate();
  bo.Validate();
  if (n_realizations < 1) throw DomainError("n_realizations must be >= 1");
  if (n_candidates < 1) throw DomainError("n_candidates must be >= 1");
}

double ExperimentCell::FinalRegret(double optimum) const {
  if (baseline) return SimpleRegret(baseline->best_value(), optimum);
  if (trace) return trace->FinalRegret();
  throw DomainError("cell has no result");
}

std::vector<double> ExperimentReport::MeanRegretCurve(
    const std::string& method) const {
  std::vector<double> sum;
  std::vector<int> count;
  for (const ExperimentCell& cell : cells) {
    if (cell.method != method || !cell.ok() || !cell.trace) continue;
    const auto& recs = cell.trace->records;
    if (sum.size() < recs.size()) {
      sum.resize(recs.size(), 0.0);
      count.resize(recs.size(), 0);
    }
    for (std::size_t i = 0; i < recs.size(); ++i) {
      sum[i] += recs[i].simple_regret;
      ++count[i];
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] /= count[i];
  return sum;
}

double ExperimentReport::MeanBaselineRegret() const {
  double sum = 0.0;
  int n = 0;
  for (const ExperimentCell& cell : cells) {
    if (cell.method != kBaselineMethod || !cell.ok() || !cell.baseline) continue;
    sum += cell.FinalRegret(config.bo.optimum);
    ++n;
  }
  return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  config.Validate();
  const Scene scene = GenerateScene(config.scene);

  std::vector<PointCloud> noisy;
  noisy.reserve(static_cast<std::size_t>(config.n_realizations));
  for (int r = 0; r < config.n_realizations; ++r) {
    noisy.push_back(ApplyNoise(scene.cloud, SampleRealization(config.noise, scene, r)));
  }

  ExperimentReport report;
  report.config = config;
  for (int r = 0; r < config.n_realizations; ++r) {
    report.cells.push_back({kBaselineMethod, r, std::nullopt, std::nullopt, {}});
    for (KernelFamily k : config.kernels) {
      report.cells.push_back({std::string(KernelName(k)), r, std::nullopt,
                              std::nullopt, {}});
    }
  }

  const std::string scene_name(LayoutName(config.scene.layout));
  auto run_cell = [&](ExperimentCell& cell) {
    const auto r = static_cast<std::uint64_t>(cell.realization);
    const std::uint64_t run_seed = DeriveSeed(config.master_seed, r);
    try {
      if (cell.method == kBaselineMethod) {
        cell.baseline = CircularBaseline(config.bo, noisy[r], config.n_candidates,
                                         DeriveSeed(run_seed, 0xBA5E));
        return;
      }
      BoConfig bo = config.bo;
      bo.kernel = ParseKernel(cell.method);
      bo.seed = run_seed;
      Objective objective =
          config.resample_noise
              ? ResampledNoiseObjective(scene, config.noise, bo.reward)
              : FrozenNoiseObjective(noisy[r], bo.reward);
      RegretTrace trace = RunBo(bo, objective);
      trace.scene = scene_name;
      trace.realization = cell.realization;
      if (trace.incomplete) cell.error = trace.error;
      cell.trace = std::move(trace);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::max(1, config.threads)), 1, report.cells.size());
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < report.cells.size(); i = next++) {
          run_cell(report.cells[i]);
        }
      });
    }
  }
  return report;
}

}  // namespace viewplan
