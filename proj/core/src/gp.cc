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

#include "viewplan/gp.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "viewplan/errors.h"

namespace viewplan {
namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt5 = 2.23606797749979;
constexpr double kLog2Pi = 1.8378770664093453;
constexpr std::array<double, 6> kJitterLadder = {0.0,  1e-8, 1e-7,
                                                 1e-6, 1e-5, 1e-4};

double KernelFromDistance(KernelFamily family, double variance, double r2) {
  switch (family) {
    case KernelFamily::kRbf:
    case KernelFamily::kArdRbf:
      return variance * std::exp(-0.5 * r2);
    case KernelFamily::kMatern15: {
      const double r = std::sqrt(r2);
      return variance * (1.0 + kSqrt3 * r) * std::exp(-kSqrt3 * r);
    }
    case KernelFamily::kMatern25: {
      const double r = std::sqrt(r2);
      return variance * (1.0 + kSqrt5 * r + 5.0 * r2 / 3.0) *
             std::exp(-kSqrt5 * r);
    }
  }
  return 0.0;
}

// g(r) with d k / d log(l_k) = g(r) * ((a_k - b_k) / l_k)^2.
double LengthscaleFactor(KernelFamily family, double variance, double r2) {
  switch (family) {
    case KernelFamily::kRbf:
    case KernelFamily::kArdRbf:
      return variance * std::exp(-0.5 * r2);
    case KernelFamily::kMatern15:
      return 3.0 * variance * std::exp(-kSqrt3 * std::sqrt(r2));
    case KernelFamily::kMatern25: {
      const double r = std::sqrt(r2);
      return (5.0 / 3.0) * variance * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r);
    }
  }
  return 0.0;
}

// Factorizes `k` in place of the jitter ladder. Returns the jitter used.
double FactorizeWithJitter(const Eigen::MatrixXd& k,
                           Eigen::LLT<Eigen::MatrixXd>* chol) {
  const Eigen::Index n = k.rows();
  for (double jitter : kJitterLadder) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += jitter;
    chol->compute(kj);
    if (chol->info() == Eigen::Success &&
        chol->matrixLLT().diagonal().allFinite() &&
        (chol->matrixLLT().diagonal().array() > 0.0).all()) {
      return jitter;
    }
  }
  throw NumericalError("kernel matrix of size " + std::to_string(n) +
                           " is not positive definite even with jitter 1e-4",
                       kJitterLadder.back());
}

KernelSpec SpecFromLogParams(KernelFamily family, const Eigen::VectorXd& p) {
  KernelSpec spec;
  spec.family = family;
  spec.output_variance = std::exp(p[0]);
  spec.lengthscales = p.segment(1, p.size() - 2).array().exp();
  return spec;
}

}  // namespace

std::string_view KernelName(KernelFamily family) {
  switch (family) {
    case KernelFamily::kRbf: return "rbf";
    case KernelFamily::kArdRbf: return "ard";
    case KernelFamily::kMatern15: return "matern15";
    case KernelFamily::kMatern25: return "matern25";
  }
  return "unknown";
}

KernelFamily ParseKernel(std::string_view name) {
  if (name == "rbf") return KernelFamily::kRbf;
  if (name == "ard" || name == "ard_rbf") return KernelFamily::kArdRbf;
  if (name == "matern15") return KernelFamily::kMatern15;
  if (name == "matern25") return KernelFamily::kMatern25;
  throw DomainError("unknown kernel '" + std::string(name) +
                    "' (expected rbf, ard, matern15 or matern25)");
}

void KernelSpec::Validate() const {
  if (!(output_variance > 0.0) || !std::isfinite(output_variance)) {
    throw DomainError("kernel output variance must be positive");
  }
  if (lengthscales.size() == 0 || !lengthscales.allFinite() ||
      !(lengthscales.array() > 0.0).all()) {
    throw DomainError("kernel lengthscales must be positive");
  }
}

double KernelSpec::ScaledDistanceSquared(
    const Eigen::Ref<const Eigen::VectorXd>& a,
    const Eigen::Ref<const Eigen::VectorXd>& b) const {
  if (a.size() != b.size()) {
    throw DomainError("kernel inputs have different dimensions");
  }
  if (lengthscales.size() != 1 && lengthscales.size() != a.size()) {
    throw DomainError("lengthscale count does not match input dimension");
  }
  if (lengthscales.size() == 1) {
    return (a - b).squaredNorm() / (lengthscales[0] * lengthscales[0]);
  }
  return (a - b).cwiseQuotient(lengthscales).squaredNorm();
}

double KernelEval(const KernelSpec& spec,
                  const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  spec.Validate();
  return KernelFromDistance(spec.family, spec.output_variance,
                            spec.ScaledDistanceSquared(a, b));
}

Eigen::MatrixXd KernelMatrix(const KernelSpec& spec, const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b) {
  if (a.cols() != b.cols()) {
    throw DomainError("kernel inputs have different dimensions");
  }
  spec.Validate();
  Eigen::MatrixXd out(a.rows(), b.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      out(i, j) = KernelFromDistance(
          spec.family, spec.output_variance,
          spec.ScaledDistanceSquared(a.row(i).transpose(), b.row(j).transpose()));
    }
  }
  return out;
}

OutputTransform OutputTransform::Standardize(const Eigen::VectorXd& y) {
  OutputTransform t;
  if (y.size() == 0) return t;
  t.shift = y.mean();
  const double var = (y.array() - t.shift).square().mean();
  const double sd = std::sqrt(var);
  t.scale = sd > 1e-12 ? sd : 1.0;
  return t;
}

GpModel::GpModel(KernelSpec kernel, double noise_variance,
                 Eigen::MatrixXd inputs, Eigen::VectorXd outputs,
                 OutputTransform transform)
    : kernel_(std::move(kernel)),
      noise_variance_(noise_variance),
      inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      transform_(transform) {
  kernel_.Validate();
  if (!(noise_variance_ >= 0.0) || !std::isfinite(noise_variance_)) {
    throw DomainError("noise variance must be non-negative");
  }
  if (inputs_.rows() != outputs_.size()) {
    throw DomainError("training inputs and outputs differ in count");
  }
  if (inputs_.rows() == 0) {
    throw DomainError("a GP model needs at least one observation");
  }
  if (!(transform_.scale > 0.0)) {
    throw DomainError("output transform scale must be positive");
  }
  targets_ = (outputs_.array() - transform_.shift) / transform_.scale;

  Eigen::MatrixXd k = KernelMatrix(kernel_, inputs_, inputs_);
  k.diagonal().array() += noise_variance_;
  jitter_ = FactorizeWithJitter(k, &chol_);
  alpha_ = chol_.solve(targets_);
}

Posterior GpModel::Predict(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (z.size() != dimension()) {
    throw DomainError("query dimension " + std::to_string(z.size()) +
                      " does not match model dimension " +
                      std::to_string(dimension()));
  }
  Eigen::VectorXd kz(size());
  for (Eigen::Index i = 0; i < size(); ++i) {
    kz[i] = KernelEval(kernel_, inputs_.row(i).transpose(), z);
  }
  const double mean = kz.dot(alpha_);
  chol_.matrixL().solveInPlace(kz);
  const double var = std::max(0.0, kernel_.output_variance - kz.squaredNorm());
  return {transform_.shift + transform_.scale * mean,
          transform_.scale * transform_.scale * var};
}

void GpModel::PredictBatch(const Eigen::MatrixXd& z, Eigen::VectorXd* mean,
                           Eigen::VectorXd* variance) const {
  if (z.cols() != dimension()) {
    throw DomainError("query dimension does not match model dimension");
  }
  Eigen::MatrixXd kz = KernelMatrix(kernel_, inputs_, z);  // t x m
  Eigen::VectorXd mu = kz.transpose() * alpha_;
  chol_.matrixL().solveInPlace(kz);
  Eigen::VectorXd var =
      (kernel_.output_variance - kz.colwise().squaredNorm().transpose().array())
          .cwiseMax(0.0);
  *mean = (transform_.shift + transform_.scale * mu.array()).matrix();
  *variance = (transform_.scale * transform_.scale * var.array()).matrix();
}

double GpModel::LogMarginalLikelihood() const {
  const double n = static_cast<double>(size());
  return -0.5 * targets_.dot(alpha_) -
         chol_.matrixLLT().diagonal().array().log().sum() - 0.5 * n * kLog2Pi;
}

GpModel GpModel::WithObservation(const Eigen::VectorXd& z, double y) const {
  if (z.size() != dimension()) {
    throw DomainError("observation dimension does not match model dimension");
  }
  Eigen::MatrixXd inputs(size() + 1, dimension());
  inputs.topRows(size()) = inputs_;
  inputs.row(size()) = z.transpose();
  Eigen::VectorXd outputs(size() + 1);
  outputs.head(size()) = outputs_;
  outputs[size()] = y;
  return GpModel(kernel_, noise_variance_, std::move(inputs),
                 std::move(outputs), transform_);
}

Eigen::Index HyperparameterCount(KernelFamily family, Eigen::Index dimension) {
  return 2 + (family == KernelFamily::kArdRbf ? dimension : 1);
}

double LogMarginalLikelihood(KernelFamily family,
                             const Eigen::VectorXd& log_params,
                             const Eigen::MatrixXd& inputs,
                             const Eigen::VectorXd& targets,
                             Eigen::VectorXd* gradient) {
  const Eigen::Index d = inputs.cols();
  const Eigen::Index t = inputs.rows();
  if (log_params.size() != HyperparameterCount(family, d)) {
    throw DomainError("wrong number of log hyperparameters");
  }
  if (targets.size() != t) {
    throw DomainError("training inputs and outputs differ in count");
  }
  const KernelSpec spec = SpecFromLogParams(family, log_params);
  const double noise = std::exp(log_params[log_params.size() - 1]);

  Eigen::MatrixXd r2(t, t);
  Eigen::MatrixXd kf(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      r2(i, j) = r2(j, i) = spec.ScaledDistanceSquared(
          inputs.row(i).transpose(), inputs.row(j).transpose());
      kf(i, j) = kf(j, i) =
          KernelFromDistance(family, spec.output_variance, r2(i, j));
    }
  }
  Eigen::MatrixXd k = kf;
  k.diagonal().array() += noise;
  Eigen::LLT<Eigen::MatrixXd> chol;
  FactorizeWithJitter(k, &chol);
  const Eigen::VectorXd alpha = chol.solve(targets);
  const double mll = -0.5 * targets.dot(alpha) -
                     chol.matrixLLT().diagonal().array().log().sum() -
                     0.5 * static_cast<double>(t) * kLog2Pi;
  if (gradient == nullptr) return mll;

  // dL/dtheta = 0.5 * tr(W dK/dtheta) with W = alpha alpha^T - K^{-1}.
  const Eigen::MatrixXd kinv =
      chol.solve(Eigen::MatrixXd::Identity(t, t));
  const Eigen::MatrixXd w = alpha * alpha.transpose() - kinv;

  gradient->resize(log_params.size());
  (*gradient)[0] = 0.5 * w.cwiseProduct(kf).sum();
  (*gradient)[log_params.size() - 1] = 0.5 * noise * w.trace();

  Eigen::MatrixXd g(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      g(i, j) = g(j, i) =
          w(i, j) * LengthscaleFactor(family, spec.output_variance, r2(i, j));
    }
  }
  if (family != KernelFamily::kArdRbf) {
    (*gradient)[1] = 0.5 * g.cwiseProduct(r2).sum();
  } else {
    const Eigen::VectorXd row_sums = g.rowwise().sum();
    for (Eigen::Index dim = 0; dim < d; ++dim) {
      const Eigen::VectorXd x = inputs.col(dim);
      const double l2 = spec.lengthscales[dim] * spec.lengthscales[dim];
      // sum_ab g_ab (x_a - x_b)^2 = 2 sum_a x_a^2 rowsum_a - 2 x^T g x.
      const double s = 2.0 * x.array().square().matrix().dot(row_sums) -
                       2.0 * x.dot(g * x);
      (*gradient)[1 + dim] = 0.5 * s / l2;
    }
  }
  return mll;
}

namespace {

struct LogBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Eigen::VectorXd Project(const Eigen::VectorXd& x) const {
    return x.cwiseMax(lo).cwiseMin(hi);
  }
};

LogBox MakeBox(KernelFamily family, Eigen::Index dim, const HyperBounds& b) {
  const Eigen::Index n = HyperparameterCount(family, dim);
  LogBox box{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  box.lo[0] = std::log(b.variance_min);
  box.hi[0] = std::log(b.variance_max);
  box.lo.segment(1, n - 2).setConstant(std::log(b.lengthscale_min));
  box.hi.segment(1, n - 2).setConstant(std::log(b.lengthscale_max));
  box.lo[n - 1] = std::log(b.noise_min);
  box.hi[n - 1] = std::log(b.noise_max);
  return box;
}

struct AscentResult {
  Eigen::VectorXd x;
  double value;
  int iterations;
};

// Projected Newton steps on the free coordinates, with a finite-difference
// Hessian of the analytic gradient. Gradient ascent crawls along the flat
// log-noise valley; a few Newton steps either settle it or pin it at a bound.
template <typename Eval>
AscentResult Polish(const Eval& eval, const LogBox& box, AscentResult start,
                    const FitOptions& options) {
  constexpr int kMaxSteps = 50;
  constexpr double kFdStep = 1e-5;
  constexpr double kAtBound = 1e-12;
  Eigen::VectorXd x = start.x;
  Eigen::VectorXd grad;
  double value = eval(x, &grad);
  if (!std::isfinite(value)) return start;
  const Eigen::Index n = x.size();
  int steps = 0;
  for (; steps < kMaxSteps; ++steps) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned_lo = x[i] <= box.lo[i] + kAtBound && grad[i] < 0.0;
      const bool pinned_hi = x[i] >= box.hi[i] - kAtBound && grad[i] > 0.0;
      if (!pinned_lo && !pinned_hi) free.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::VectorXd g(m);
    for (Eigen::Index a = 0; a < m; ++a) g[a] = grad[free[a]];
    if (m == 0 || g.norm() <= options.gradient_tolerance) break;

    Eigen::MatrixXd h(m, m);
    bool finite = true;
    for (Eigen::Index a = 0; a < m && finite; ++a) {
      Eigen::VectorXd up = x, down = x;
      up[free[a]] += kFdStep;
      down[free[a]] -= kFdStep;
      Eigen::VectorXd gu, gd;
      finite = std::isfinite(eval(up, &gu)) && std::isfinite(eval(down, &gd));
      if (!finite) break;
      for (Eigen::Index b = 0; b < m; ++b) {
        h(b, a) = (gu[free[b]] - gd[free[b]]) / (2.0 * kFdStep);
      }
    }
    if (!finite) break;
    // Ascent direction from the eigenvalue-modified negative Hessian.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-0.5 * (h + h.transpose()));
    if (eig.info() != Eigen::Success) break;
    const Eigen::VectorXd lam = eig.eigenvalues().cwiseAbs().cwiseMax(1e-8);
    const Eigen::VectorXd d =
        eig.eigenvectors() * (eig.eigenvectors().transpose() * g).cwiseQuotient(lam);

    bool accepted = false;
    for (double t = 1.0; t > 1e-10; t *= 0.5) {
      Eigen::VectorXd next = x;
      for (Eigen::Index a = 0; a < m; ++a) next[free[a]] += t * d[a];
      next = box.Project(next);
      if ((next - x).norm() == 0.0) break;
      Eigen::VectorXd next_grad;
      const double next_value = eval(next, &next_grad);
      if (std::isfinite(next_value) &&
          next_value >= value + 1e-4 * grad.dot(next - x)) {
        x = next;
        grad = next_grad;
        value = next_value;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(value >= start.value)) return start;
  return {x, value, start.iterations + steps};
}

// Projected gradient ascent with Barzilai-Borwein steps and an Armijo
// backtracking test along the projection arc.
AscentResult Ascend(KernelFamily family, const Eigen::MatrixXd& inputs,
                    const Eigen::VectorXd& targets, const LogBox& box,
                    Eigen::VectorXd x, const FitOptions& options) {
  auto eval = [&](const Eigen::VectorXd& p, Eigen::VectorXd* grad) {
    try {
      return LogMarginalLikelihood(family, p, inputs, targets, grad);
    } catch (const NumericalError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  x = box.Project(x);
  Eigen::VectorXd grad;
  double value = eval(x, &grad);
  if (!std::isfinite(value)) return {x, value, 0};

  double step = 0.1 / std::max(1.0, grad.cwiseAbs().maxCoeff());
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    if ((box.Project(x + grad) - x).norm() <= options.gradient_tolerance) break;

    Eigen::VectorXd next;
    Eigen::VectorXd next_grad;
    double next_value = -std::numeric_limits<double>::infinity();
    bool accepted = false;
    for (int back = 0; back < 50; ++back) {
      next = box.Project(x + step * grad);
      if ((next - x).norm() == 0.0) break;
      next_value = eval(next, &next_grad);
      if (std::isfinite(next_value) &&
          next_value >= value + 1e-4 * grad.dot(next - x)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const Eigen::VectorXd s = next - x;
    const Eigen::VectorXd y = next_grad - grad;
    const double sy = s.dot(y);
    step = sy < 0.0 ? s.squaredNorm() / -sy : 2.0 * step;
    step = std::clamp(step, 1e-10, 1e3);

    x = next;
    grad = next_grad;
    value = next_value;
  }
  return Polish(eval, box, {x, value, iter}, options);
}

}  // namespace

FitResult FitGp(KernelFamily family, const Eigen::MatrixXd& inputs,
                const Eigen::VectorXd& outputs, const FitOptions& options) {
  if (inputs.rows() < 2) {
    throw DomainError("fitting a GP needs at least two observations");
  }
  if (inputs.rows() != outputs.size()) {
    throw DomainError("training inputs and outputs differ in count");
  }
  if (options.num_starts < 1) throw DomainError("num_starts must be >= 1");

  const OutputTransform transform = OutputTransform::Standardize(outputs);
  const Eigen::VectorXd targets =
      (outputs.array() - transform.shift) / transform.scale;
  const Eigen::Index dim = inputs.cols();
  const LogBox box = MakeBox(family, dim, options.bounds);
  const Eigen::Index n = box.lo.size();

  // Random starts are drawn from a central sub-box where the likelihood
  // surface is well conditioned.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) {
    return std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo));
  };

  std::vector<Eigen::VectorXd> start_points;
  std::vector<double> start_values;
  int iterations = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  for (int s = 0; s < options.num_starts; ++s) {
    Eigen::VectorXd x0(n);
    if (s == 0) {
      x0[0] = 0.0;
      x0.segment(1, n - 2).setConstant(std::log(0.5));
      x0[n - 1] = std::log(1e-3);
    } else {
      x0[0] = draw(0.1, 5.0);
      const double l = draw(0.05, 5.0);
      for (Eigen::Index k = 1; k < n - 1; ++k) {
        x0[k] = family == KernelFamily::kArdRbf ? draw(0.05, 5.0) : l;
      }
      x0[n - 1] = draw(1e-6, 1e-1);
    }
    x0 = box.Project(x0);
    start_points.push_back(x0);
    double start_value;
    try {
      start_value = LogMarginalLikelihood(family, x0, inputs, targets);
    } catch (const NumericalError&) {
      start_value = -std::numeric_limits<double>::infinity();
    }
    start_values.push_back(start_value);

    const AscentResult r = Ascend(family, inputs, targets, box, x0, options);
    iterations += r.iterations;
    if (r.value > best_value) {
      best_value = r.value;
      best_x = r.x;
    }
  }
  if (best_x.size() == 0) {
    throw NumericalError("no multi-start hyperparameter fit succeeded",
                         kJitterLadder.back());
  }
  return FitResult{GpModel(SpecFromLogParams(family, best_x),
                           std::exp(best_x[n - 1]), inputs, outputs, transform),
                   best_x,
                   best_value,
                   std::move(start_points),
                   std::move(start_values),
                   iterations};
}

}  // namespace viewplan
