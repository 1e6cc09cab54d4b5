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

// Monge-Kantorovich ranks, quantiles and depth of a point cloud against a
// reference sample, through discrete OT for the cost -<u, x>.
//
// Potential conventions: psi lives on the reference points, its conjugate
// on the data points, and psi_j + psi*_i >= <u_j, X_i> (approximately for
// the entropic pair).

#ifndef LOTDEPTH_CORE_MK_QUANTILES_HPP_
#define LOTDEPTH_CORE_MK_QUANTILES_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lotdepth {

enum class ReferenceKind { kSphericalUniform, kGaussian };

struct ReferenceSample {
  Eigen::MatrixXd points;  // M x d, one draw per row
  ReferenceKind kind = ReferenceKind::kSphericalUniform;
  std::uint64_t seed = 0;
};

// Spherical uniform draws are R * Phi with R ~ U[0, 1] and Phi = G / |G|
// for a standard normal G. Throws ArgumentError unless M, d >= 1.
ReferenceSample SampleReference(Eigen::Index m, Eigen::Index d,
                                ReferenceKind kind, std::uint64_t seed);

enum class RankMode { kHard, kEntropic };

struct FitOptions {
  // Explicit schedule; when empty a geometric one is built from the
  // factors below times the cost scale (see EpsilonScale).
  std::vector<double> schedule;
  double eps_start_factor = 1.0;
  double eps_end_factor = 1e-3;
  int stages = 10;
  bool entropic = true;  // run the Sinkhorn schedule
  bool hard = true;      // exact assignment and strict potentials (M == n)
  int max_iter = 100000;
  double tol = 1e-9;  // L1 marginal violation per stage
};

struct QuantileModel {
  ReferenceSample reference;
  Eigen::MatrixXd data;  // n x d

  // Entropic potentials after the last stage, shifted so psi has mean 0.
  Eigen::VectorXd psi;        // M
  Eigen::VectorXd conjugate;  // n
  std::vector<double> schedule;
  double final_epsilon = 0.0;

  // Exact assignment data i -> reference assignment[i] (empty unless
  // M == n and hard fitting was requested), with potentials that make it
  // the strict argmax of <u_j, X_i> - hard_psi_j.
  std::vector<Eigen::Index> assignment;
  Eigen::VectorXd hard_psi;
  Eigen::VectorXd hard_conjugate;
  double hard_margin = 0.0;  // eta > 0 when strict
  bool hard_strict = false;

  Eigen::Index dim() const { return data.cols(); }
  bool has_entropic() const { return psi.size() > 0; }
  bool has_hard() const { return hard_psi.size() > 0; }
};

// sqrt(mean |X_i|^2) * sqrt(mean |u_j|^2): the typical size of the cost.
double EpsilonScale(const Eigen::MatrixXd& data,
                    const ReferenceSample& reference);

// Throws ArgumentError on shape problems or a bad schedule, NumericalError
// (with the stage in the message and the marginal gap attached) when a
// Sinkhorn stage does not converge.
QuantileModel FitPotentials(const Eigen::MatrixXd& data,
                            const ReferenceSample& reference,
                            const FitOptions& options = {});

// Optimal assignment for M == n: result[i] is the reference index matched
// to data point i. Deterministic.
std::vector<Eigen::Index> OptimalAssignment(const Eigen::MatrixXd& data,
                                            const Eigen::MatrixXd& reference);

// Hard: argmax_j <u_j, x> - psi_j (lowest index on ties), using the strict
// potentials when available. Entropic: softmax average of the u_j.
Eigen::VectorXd Rank(const Eigen::VectorXd& x, const QuantileModel& model,
                     RankMode mode);
// Index of the hard rank's reference point.
Eigen::Index HardRankIndex(const Eigen::VectorXd& x, const QuantileModel& model);

// Hard: argmax_i <u, X_i> - psi*_i (lowest index on ties). Entropic:
// softmax average of the X_i. Throws ArgumentError when |u| > 1 for a
// spherical reference.
Eigen::VectorXd Quantile(const Eigen::VectorXd& u, const QuantileModel& model,
                         RankMode mode);
Eigen::Index HardQuantileIndex(const Eigen::VectorXd& u,
                               const QuantileModel& model);

// Argmax over j of the final entropic plan column of every data point.
std::vector<Eigen::Index> EntropicAssignment(const QuantileModel& model);

// Tukey depth of the entropic rank: TukeyDepthSpherical(|R(x)|, d).
double MkDepth(const Eigen::VectorXd& x, const QuantileModel& model);
// Same with a precomputed rank.
double MkDepthFromRank(const Eigen::VectorXd& rank, Eigen::Index d);

// max_ij <u_j, X_i> - psi_j - psi*_i for the entropic pair. Bounded by
// FenchelYoungSlack(model) when the fit converged.
double FenchelYoungViolation(const QuantileModel& model);
double FenchelYoungSlack(const QuantileModel& model);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_MK_QUANTILES_HPP_
