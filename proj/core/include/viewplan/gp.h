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

#ifndef VIEWPLAN_GP_H_
#define VIEWPLAN_GP_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace viewplan {

enum class KernelFamily { kRbf, kArdRbf, kMatern15, kMatern25 };

std::string_view KernelName(KernelFamily family);
// Accepts rbf, ard (or ard_rbf), matern15, matern25.
KernelFamily ParseKernel(std::string_view name);

// Stationary kernel over the unit cube. A single lengthscale means isotropic;
// otherwise there is one lengthscale per input dimension.
struct KernelSpec {
  KernelFamily family = KernelFamily::kMatern25;
  double output_variance = 1.0;
  Eigen::VectorXd lengthscales = Eigen::VectorXd::Constant(1, 0.5);

  void Validate() const;
  // Scaled distance squared sum(((a_i - b_i) / l_i)^2).
  double ScaledDistanceSquared(const Eigen::Ref<const Eigen::VectorXd>& a,
                               const Eigen::Ref<const Eigen::VectorXd>& b) const;
  double Lengthscale(Eigen::Index dim) const {
    return lengthscales.size() == 1 ? lengthscales[0] : lengthscales[dim];
  }
};

double KernelEval(const KernelSpec& spec,
                  const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b);

// Cross-covariance matrix; rows of `a` and `b` are inputs.
Eigen::MatrixXd KernelMatrix(const KernelSpec& spec, const Eigen::MatrixXd& a,
                             const Eigen::MatrixXd& b);

// Affine output map used for standardization: transformed = (y - shift) / scale.
struct OutputTransform {
  double shift = 0.0;
  double scale = 1.0;

  // Zero mean, unit (population) variance; constant data keeps scale 1.
  static OutputTransform Standardize(const Eigen::VectorXd& y);
};

struct Posterior {
  double mean = 0.0;
  double variance = 0.0;
};

// Exact GP regression with a zero-mean prior on transformed outputs.
// Immutable once built; Predict is safe to call concurrently.
class GpModel {
 public:
  // Factorizes K + noise_variance * I with the jitter ladder
  // 0, 1e-8, 1e-7, ..., 1e-4. Throws NumericalError when every rung fails.
  GpModel(KernelSpec kernel, double noise_variance, Eigen::MatrixXd inputs,
          Eigen::VectorXd outputs, OutputTransform transform = {});

  // Posterior of the latent function at z, on the raw output scale.
  Posterior Predict(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  void PredictBatch(const Eigen::MatrixXd& z, Eigen::VectorXd* mean,
                    Eigen::VectorXd* variance) const;

  // log p(y | Z) of the transformed outputs.
  double LogMarginalLikelihood() const;

  // Same hyperparameters and transform, one more observation.
  GpModel WithObservation(const Eigen::VectorXd& z, double y) const;

  const KernelSpec& kernel() const { return kernel_; }
  double noise_variance() const { return noise_variance_; }
  const Eigen::MatrixXd& inputs() const { return inputs_; }
  const Eigen::VectorXd& outputs() const { return outputs_; }
  const OutputTransform& transform() const { return transform_; }
  double jitter() const { return jitter_; }
  Eigen::Index dimension() const { return inputs_.cols(); }
  Eigen::Index size() const { return inputs_.rows(); }

 private:
  KernelSpec kernel_;
  double noise_variance_;
  Eigen::MatrixXd inputs_;
  Eigen::VectorXd outputs_;
  OutputTransform transform_;
  Eigen::VectorXd targets_;  // transformed outputs
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
};

// Box constraints of the hyperparameter search on unit-cube inputs and
// standardized outputs.
struct HyperBounds {
  double lengthscale_min = 1e-3;
  double lengthscale_max = 10.0;
  double variance_min = 1e-4;
  double variance_max = 10.0;
  double noise_min = 1e-8;
  double noise_max = 1.0;
};

struct FitOptions {
  int num_starts = 8;
  std::uint64_t seed = 0;
  int max_iterations = 1000;
  double gradient_tolerance = 1e-7;
  HyperBounds bounds;
};

// Log hyperparameters [log sigma^2, log l_1..l_m, log sigma_n^2] with m = 1
// for isotropic families and m = dimension for kArdRbf.
Eigen::Index HyperparameterCount(KernelFamily family, Eigen::Index dimension);

// Exact log marginal likelihood of `targets` and, when `gradient` is not null,
// its gradient with respect to the log hyperparameters.
double LogMarginalLikelihood(KernelFamily family,
                             const Eigen::VectorXd& log_params,
                             const Eigen::MatrixXd& inputs,
                             const Eigen::VectorXd& targets,
                             Eigen::VectorXd* gradient = nullptr);

struct FitResult {
  GpModel model;
  Eigen::VectorXd log_params;
  double log_likelihood = 0.0;
  std::vector<Eigen::VectorXd> start_points;
  std::vector<double> start_log_likelihoods;
  int iterations = 0;
};

// Standardizes the outputs and maximizes the log marginal likelihood by
// multi-start projected gradient ascent in log-hyperparameter space.
FitResult FitGp(KernelFamily family, const Eigen::MatrixXd& inputs,
                const Eigen::VectorXd& outputs, const FitOptions& options = {});

}  // namespace viewplan

#endif  // VIEWPLAN_GP_H_
