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

#include "core/mk_quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>

#include "core/discrete_ot.hpp"
#include "core/errors.hpp"
#include "core/network_simplex.hpp"
#include "core/rng.hpp"
#include "core/sinkhorn.hpp"
#include "core/special.hpp"

namespace lotdepth {

namespace {

// Softmax weights of scores / eps, max-shifted.
Eigen::VectorXd Softmax(const Eigen::VectorXd& scores, double eps) {
  const double mx = scores.maxCoeff();
  Eigen::VectorXd w =
      ((scores.array() - mx) / eps).unaryExpr([](double x) { return std::exp(x); }).matrix();
  return w / w.sum();
}

// First index of the maximum.
Eigen::Index ArgMax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < v.size(); ++k) {
    if (v[k] > v[best]) best = k;
  }
  return best;
}

struct SquaredPointCost {
  const Eigen::MatrixXd& a;
  const Eigen::MatrixXd& b;
  double operator()(int i, int j) const {
    return (a.row(i) - b.row(j)).squaredNorm();
  }
};

// Bellman-Ford on the difference constraints
//   psi_s - psi_k <= <u_s - u_k, X_i> - eta,  s = sigma(i), k != s,
// starting from `psi`. Returns false when the pass cap is reached.
bool RelaxStrict(const Eigen::MatrixXd& data, const Eigen::MatrixXd& ref,
                 const std::vector<Eigen::Index>& sigma, double eta,
                 int max_passes, Eigen::VectorXd& psi) {
  const Eigen::Index n = data.rows();
  Eigen::VectorXd g(n);
  for (int pass = 0; pass < max_passes; ++pass) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index s = sigma[i];
      g.noalias() = ref * data.row(i).transpose();
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k != s) best = std::min(best, psi[k] - g[k]);
      }
      const double cand = g[s] - eta + best;
      if (cand < psi[s]) {
        psi[s] = cand;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

// True when sigma(i) is the unique argmax of <u_j, X_i> - psi_j for all i.
bool IsStrictArgmax(const Eigen::MatrixXd& data, const Eigen::MatrixXd& ref,
                    const std::vector<Eigen::Index>& sigma,
                    const Eigen::VectorXd& psi) {
  Eigen::VectorXd score(ref.rows());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    score.noalias() = ref * data.row(i).transpose() - psi;
    const Eigen::Index s = sigma[i];
    for (Eigen::Index k = 0; k < score.size(); ++k) {
      if (k != s && !(score[k] < score[s])) return false;
    }
  }
  return true;
}

void FitHard(QuantileModel& model, double scale) {
  const Eigen::MatrixXd& x = model.data;
  const Eigen::MatrixXd& u = model.reference.points;
  const Eigen::Index n = x.rows();
  const std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  const SimplexSolution sol =
      SolveNetworkSimplex(ones, ones, SquaredPointCost{x, u}, SimplexOptions{});
  model.assignment.assign(static_cast<std::size_t>(n), -1);
  for (const auto& f : sol.flows) {
    if (f.mass > 0.5) model.assignment[f.source] = f.target;
  }
  // Duals of |X_i - u_j|^2 translate to psi_j = (|u_j|^2 - g_j) / 2 for
  // the inner-product cost.
  Eigen::VectorXd warm(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    warm[j] = 0.5 * (u.row(j).squaredNorm() - sol.target_potential[j]);
  }
  // Any positive margin that survives the exact argmax check will do; a
  // tiny one keeps Bellman-Ford to a handful of passes from the warm start.
  const int max_passes = static_cast<int>(n) + 1;
  const double unit = std::max(scale, 1e-300);
  model.hard_strict = false;
  model.hard_margin = 0.0;
  Eigen::VectorXd psi;
  for (double eta : {1e-9 * unit, 1e-12 * unit}) {
    psi = warm;
    if (RelaxStrict(x, u, model.assignment, eta, max_passes, psi) &&
        IsStrictArgmax(x, u, model.assignment, psi)) {
      model.hard_strict = true;
      model.hard_margin = eta;
      break;
    }
  }
  if (!model.hard_strict) {
    // Ties in the data (or a numerically degenerate cloud): keep the
    // optimal duals; argmax ties then go to the lowest index.
    psi = warm;
    RelaxStrict(x, u, model.assignment, 0.0, max_passes, psi);
  }
  psi.array() -= psi.mean();
  model.hard_psi = psi;
  model.hard_conjugate.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index s = model.assignment[i];
    model.hard_conjugate[i] = u.row(s).dot(x.row(i)) - psi[s];
  }
}

}  // namespace

ReferenceSample SampleReference(Eigen::Index m, Eigen::Index d,
                                ReferenceKind kind, std::uint64_t seed) {
  if (m < 1 || d < 1) throw ArgumentError("reference size and dimension must be >= 1");
  ReferenceSample out{Eigen::MatrixXd(m, d), kind, seed};
  Rng rng(seed);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) out.points(j, k) = rng.Normal();
    if (kind == ReferenceKind::kSphericalUniform) {
      double norm = out.points.row(j).norm();
      while (!(norm > 0.0)) {  // measure-zero event, redraw
        for (Eigen::Index k = 0; k < d; ++k) out.points(j, k) = rng.Normal();
        norm = out.points.row(j).norm();
      }
      const double radius = rng.Uniform();
      out.points.row(j) *= radius / norm;
    }
  }
  return out;
}

double EpsilonScale(const Eigen::MatrixXd& data,
                    const ReferenceSample& reference) {
  const double data_rms = std::sqrt(data.rowwise().squaredNorm().mean());
  const double ref_rms = std::sqrt(reference.points.rowwise().squaredNorm().mean());
  return data_rms * ref_rms;
}

std::vector<Eigen::Index> OptimalAssignment(const Eigen::MatrixXd& data,
                                            const Eigen::MatrixXd& reference) {
  if (data.rows() != reference.rows() || data.cols() != reference.cols()) {
    throw ArgumentError("assignment needs equally many points of equal dimension");
  }
  const std::vector<double> ones(static_cast<std::size_t>(data.rows()), 1.0);
  const SimplexSolution sol = SolveNetworkSimplex(
      ones, ones, SquaredPointCost{data, reference}, SimplexOptions{});
  std::vector<Eigen::Index> out(static_cast<std::size_t>(data.rows()), -1);
  for (const auto& f : sol.flows) {
    if (f.mass > 0.5) out[f.source] = f.target;
  }
  return out;
}

QuantileModel FitPotentials(const Eigen::MatrixXd& data,
                            const ReferenceSample& reference,
                            const FitOptions& options) {
  const Eigen::Index n = data.rows();
  const Eigen::Index m = reference.points.rows();
  if (n < 1) throw ArgumentError("no data points");
  if (data.cols() != reference.points.cols()) {
    throw ArgumentError("data dimension " + std::to_string(data.cols()) +
                        " differs from reference dimension " +
                        std::to_string(reference.points.cols()));
  }
  if (!data.allFinite()) throw DomainError("data has non-finite entries");
  QuantileModel model;
  model.reference = reference;
  model.data = data;
  double scale = EpsilonScale(data, reference);
  if (!(scale > 0.0)) scale = 1.0;  // all data at the origin

  if (options.entropic) {
    model.schedule = options.schedule.empty()
                         ? GeometricSchedule(options.eps_start_factor * scale,
                                             options.eps_end_factor * scale,
                                             options.stages)
                         : options.schedule;
    for (std::size_t k = 0; k < model.schedule.size(); ++k) {
      if (!(model.schedule[k] > 0.0) ||
          (k > 0 && !(model.schedule[k] < model.schedule[k - 1]))) {
        throw ArgumentError("epsilon schedule must be positive and strictly decreasing");
      }
    }
    const RowMatrix cost = -(reference.points * data.transpose());
    const Eigen::VectorXd a = Eigen::VectorXd::Constant(m, 1.0 / m);
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(n, 1.0 / n);
    SinkhornResult r;
    for (std::size_t k = 0; k < model.schedule.size(); ++k) {
      const SinkhornOptions so{model.schedule[k], options.max_iter, options.tol};
      r = SemiDualNewton(cost, a, b, so, k == 0 ? nullptr : &r.g);
      if (!r.converged) {
        throw NumericalError(
            "potential fit did not converge at stage " + std::to_string(k) +
                " (epsilon " + std::to_string(model.schedule[k]) +
                ", marginal gap " + std::to_string(r.marginal_error) + ")",
            r.marginal_error);
      }
    }
    model.final_epsilon = model.schedule.back();
    const double shift = -r.f.mean();
    model.psi = -r.f.array() - shift;
    model.conjugate = -r.g.array() + shift;
  }
  if (options.hard && m == n) FitHard(model, scale);
  if (!model.has_entropic() && !model.has_hard()) {
    throw ArgumentError("fit produced no potentials: enable the entropic stage or use M == n");
  }
  return model;
}

Eigen::Index HardRankIndex(const Eigen::VectorXd& x, const QuantileModel& model) {
  if (x.size() != model.dim()) throw ArgumentError("query dimension mismatch");
  const Eigen::VectorXd& psi = model.has_hard() ? model.hard_psi : model.psi;
  return ArgMax(model.reference.points * x - psi);
}

Eigen::VectorXd Rank(const Eigen::VectorXd& x, const QuantileModel& model,
                     RankMode mode) {
  if (x.size() != model.dim()) throw ArgumentError("query dimension mismatch");
  if (mode == RankMode::kHard) {
    return model.reference.points.row(HardRankIndex(x, model)).transpose();
  }
  if (!model.has_entropic()) throw ArgumentError("model has no entropic potentials");
  const Eigen::VectorXd w =
      Softmax(model.reference.points * x - model.psi, model.final_epsilon);
  return model.reference.points.transpose() * w;
}

Eigen::Index HardQuantileIndex(const Eigen::VectorXd& u,
                               const QuantileModel& model) {
  if (u.size() != model.dim()) throw ArgumentError("query dimension mismatch");
  if (model.reference.kind == ReferenceKind::kSphericalUniform && u.norm() > 1.0) {
    throw ArgumentError("quantile level |u| = " + std::to_string(u.norm()) +
                        " exceeds 1");
  }
  const Eigen::VectorXd& conj =
      model.has_hard() ? model.hard_conjugate : model.conjugate;
  return ArgMax(model.data * u - conj);
}

Eigen::VectorXd Quantile(const Eigen::VectorXd& u, const QuantileModel& model,
                         RankMode mode) {
  const Eigen::Index hard = HardQuantileIndex(u, model);
  if (mode == RankMode::kHard) return model.data.row(hard).transpose();
  if (!model.has_entropic()) throw ArgumentError("model has no entropic potentials");
  const Eigen::VectorXd w =
      Softmax(model.data * u - model.conjugate, model.final_epsilon);
  return model.data.transpose() * w;
}

std::vector<Eigen::Index> EntropicAssignment(const QuantileModel& model) {
  if (!model.has_entropic()) throw ArgumentError("model has no entropic potentials");
  std::vector<Eigen::Index> out(static_cast<std::size_t>(model.data.rows()));
  for (Eigen::Index i = 0; i < model.data.rows(); ++i) {
    // Column i of the plan is proportional to exp((<u_j, X_i> - psi_j) / eps).
    out[i] = ArgMax(model.reference.points * model.data.row(i).transpose() -
                    model.psi);
  }
  return out;
}

double MkDepthFromRank(const Eigen::VectorXd& rank, Eigen::Index d) {
  return TukeyDepthSpherical(std::min(1.0, rank.norm()), static_cast<int>(d));
}

double MkDepth(const Eigen::VectorXd& x, const QuantileModel& model) {
  if (model.reference.kind != ReferenceKind::kSphericalUniform) {
    throw ArgumentError("MK depth needs a spherical-uniform reference");
  }
  return MkDepthFromRank(Rank(x, model, RankMode::kEntropic), model.dim());
}

double FenchelYoungViolation(const QuantileModel& model) {
  if (!model.has_entropic()) throw ArgumentError("model has no entropic potentials");
  double worst = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < model.data.rows(); ++i) {
    const Eigen::VectorXd gap = model.reference.points * model.data.row(i).transpose() -
                                model.psi - Eigen::VectorXd::Constant(model.psi.size(), model.conjugate[i]);
    worst = std::max(worst, gap.maxCoeff());
  }
  return worst;
}

double FenchelYoungSlack(const QuantileModel& model) {
  return model.final_epsilon *
         std::log(static_cast<double>(std::max<Eigen::Index>(2, model.reference.points.rows())));
}

}  // namespace lotdepth
