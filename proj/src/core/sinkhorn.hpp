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

// Entropic OT on a dense cost matrix. Potentials (f, g) parameterize the
// plan as pi_ij = exp((f_i + g_j - C_ij) / eps), in both the scaling and
// the log-domain variant, so warm starts move freely between them.

#ifndef LOTDEPTH_CORE_SINKHORN_HPP_
#define LOTDEPTH_CORE_SINKHORN_HPP_

#include <Eigen/Dense>

namespace lotdepth {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SinkhornOptions {
  double epsilon = 1.0;
  int max_iter = 10000;
  // L1 violation of the row marginal (columns are exact after each sweep).
  double tol = 1e-9;
};

struct SinkhornResult {
  Eigen::VectorXd f;
  Eigen::VectorXd g;
  int iterations = 0;
  double marginal_error = 0.0;
  bool converged = false;
};

// Log-domain iterations; stable for any epsilon. `warm_f` / `warm_g` may be
// null; only the column potential is used to seed the first row sweep.
SinkhornResult SinkhornLog(const RowMatrix& cost, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b,
                           const SinkhornOptions& options,
                           const Eigen::VectorXd* warm_g = nullptr);

// Classic scaling iterations. Throws UnderflowError when the Gibbs kernel
// or the scalings leave the double range; use SinkhornLog then.
SinkhornResult SinkhornScaling(const RowMatrix& cost, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b,
                               const SinkhornOptions& options,
                               const Eigen::VectorXd* warm_g = nullptr);

// Damped Newton ascent on the semi-dual in g (f is the exact soft-min of
// g, so rows are always feasible and the column violation is the
// gradient). Converges in a few dozen steps where plain iterations stall
// at small epsilon; each step costs O(M n^2 + n^3).
SinkhornResult SemiDualNewton(const RowMatrix& cost, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b,
                              const SinkhornOptions& options,
                              const Eigen::VectorXd* warm_g = nullptr);

RowMatrix PlanFromPotentials(const RowMatrix& cost, const Eigen::VectorXd& f,
                             const Eigen::VectorXd& g, double epsilon);

// sum_i |sum_j pi_ij - a_i| + sum_j |sum_i pi_ij - b_j|
double MarginalViolation(const RowMatrix& plan, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_SINKHORN_HPP_
