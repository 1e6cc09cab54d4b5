// Copyright 2026 The lotdepth Authors
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

// PCA on flattened tangent vectors (the Log-PCA latent space) with
// projection, reconstruction and residual distance.

#ifndef LOTDEPTH_CORE_PCA_HPP_
#define LOTDEPTH_CORE_PCA_HPP_

#include <span>

#include <Eigen/Dense>

namespace lotdepth {

enum class PcaConvention {
  kOrthonormal,  // x = U^T (v - m),            v = m + U x
  kPaperScaled,  // x = L^{1/2} U^T (v - m),    v = m + U L^{-1/2} x
};

struct PcaOptions {
  PcaConvention convention = PcaConvention::kOrthonormal;
  // Works in the template-weighted metric: coordinates are multiplied by
  // sqrt(metric_weights) before the decomposition.
  bool weighted = false;
  Eigen::VectorXd metric_weights;  // length 2p; required when weighted
};

struct PcaModel {
  Eigen::VectorXd mean;         // 2p
  Eigen::MatrixXd basis;        // 2p x d, orthonormal columns
  Eigen::VectorXd eigenvalues;  // d, nonincreasing
  double total_variance = 0.0;  // trace of the sample covariance
  PcaConvention convention = PcaConvention::kOrthonormal;
  bool weighted = false;
  Eigen::VectorXd metric_weights;  // 2p, empty when unweighted

  Eigen::Index dim() const { return basis.cols(); }
  Eigen::Index ambient_dim() const { return mean.size(); }
  // lambda_k / total_variance per component (zeros when the data has no
  // spread).
  Eigen::VectorXd ExplainedVarianceRatio() const;
};

// Rows of `data` are the n flattened vectors. Requires n >= 2 and
// 1 <= d <= min(n - 1, 2p). Sample covariance uses 1 / (n - 1).
// Eigenvectors come from the n x n Gram matrix when that is smaller.
// Directions with zero variance are completed deterministically by
// Gram-Schmidt on the canonical basis. Each column has its largest-
// magnitude coordinate positive.
PcaModel FitPca(const Eigen::MatrixXd& data, Eigen::Index d,
                const PcaOptions& options = {});

Eigen::VectorXd Project(const Eigen::VectorXd& v, const PcaModel& model);
// Row-wise Project.
Eigen::MatrixXd ProjectRows(const Eigen::MatrixXd& data, const PcaModel& model);

// Throws DegenerateDirectionError under kPaperScaled when a zero
// eigenvalue meets a nonzero coordinate.
Eigen::VectorXd Reconstruct(const Eigen::VectorXd& x, const PcaModel& model);

// |(v - m) - U U^T (v - m)|_2 in the model metric.
double ResidualDistance(const Eigen::VectorXd& v, const PcaModel& model);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_PCA_HPP_
