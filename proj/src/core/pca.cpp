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

#include "core/pca.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "core/errors.hpp"

namespace lotdepth {

namespace {

// Relative size below which an eigenvalue counts as zero.
constexpr double kNullTolerance = 1e-12;

Eigen::VectorXd MetricScale(const PcaModel& model) {
  return model.weighted ? Eigen::VectorXd(model.metric_weights.array().sqrt())
                        : Eigen::VectorXd();
}

Eigen::VectorXd ToModelSpace(const Eigen::VectorXd& v, const PcaModel& model) {
  if (v.size() != model.ambient_dim()) {
    throw ArgumentError("vector has length " + std::to_string(v.size()) +
                        ", model expects " + std::to_string(model.ambient_dim()));
  }
  Eigen::VectorXd c = v - model.mean;
  if (model.weighted) c.array() *= model.metric_weights.array().sqrt();
  return c;
}

// Extends the first `have` orthonormal columns of q to `want` columns using
// canonical basis vectors in index order.
void CompleteBasis(Eigen::MatrixXd& q, Eigen::Index have, Eigen::Index want) {
  const Eigen::Index dim = q.rows();
  Eigen::Index next = 0;
  for (Eigen::Index c = have; c < want; ++c) {
    for (;; ++next) {
      if (next >= dim) throw NumericalError("PCA basis completion failed", 0.0);
      Eigen::VectorXd e = Eigen::VectorXd::Unit(dim, next);
      // Two passes of modified Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index k = 0; k < c; ++k) e -= q.col(k).dot(e) * q.col(k);
      }
      const double norm = e.norm();
      if (norm > 1e-6) {
        q.col(c) = e / norm;
        ++next;
        break;
      }
    }
  }
}

void FixSigns(Eigen::MatrixXd& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      // Strict comparison keeps the lowest index on ties.
      if (std::fabs(basis(r, c)) > best) {
        best = std::fabs(basis(r, c));
        arg = r;
      }
    }
    if (basis(arg, c) < 0.0) basis.col(c) = -basis.col(c);
  }
}

}  // namespace

Eigen::VectorXd PcaModel::ExplainedVarianceRatio() const {
  if (!(total_variance > 0.0)) return Eigen::VectorXd::Zero(eigenvalues.size());
  return eigenvalues / total_variance;
}

PcaModel FitPca(const Eigen::MatrixXd& data, Eigen::Index d,
                const PcaOptions& options) {
  const Eigen::Index n = data.rows();
  const Eigen::Index p2 = data.cols();
  if (n < 2) throw ArgumentError("PCA needs at least 2 vectors");
  if (d < 1 || d > std::min(n - 1, p2)) {
    throw ArgumentError("PCA dimension " + std::to_string(d) +
                        " outside [1, min(n - 1, 2p)] = [1, " +
                        std::to_string(std::min(n - 1, p2)) + "]");
  }
  if (!data.allFinite()) throw DomainError("PCA input has non-finite entries");
  PcaModel model;
  model.convention = options.convention;
  model.weighted = options.weighted;
  if (options.weighted) {
    if (options.metric_weights.size() != p2 ||
        (options.metric_weights.array() < 0.0).any()) {
      throw ArgumentError("weighted PCA needs 2p nonnegative metric weights");
    }
    model.metric_weights = options.metric_weights;
  }
  model.mean = data.colwise().mean().transpose();
  Eigen::MatrixXd x = data.rowwise() - model.mean.transpose();
  if (options.weighted) {
    x.array().rowwise() *= options.metric_weights.array().sqrt().transpose();
  }
  const double denom = static_cast<double>(n - 1);
  model.total_variance = x.squaredNorm() / denom;

  Eigen::VectorXd evals;  // descending
  Eigen::MatrixXd evecs;  // 2p x d
  if (n < p2) {
    const Eigen::MatrixXd gram = (x * x.transpose()) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) {
      throw NumericalError("Gram eigendecomposition failed", 0.0);
    }
    evals = es.eigenvalues().reverse().head(d);
    const Eigen::MatrixXd a = es.eigenvectors().rowwise().reverse().leftCols(d);
    evecs = Eigen::MatrixXd::Zero(p2, d);
    const double top = std::max(evals.size() > 0 ? evals[0] : 0.0, 0.0);
    Eigen::Index good = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
      if (evals[k] <= kNullTolerance * top || evals[k] <= 0.0) break;
      // U = X^T a / sqrt((n - 1) lambda)
      Eigen::VectorXd u = x.transpose() * a.col(k);
      u /= std::sqrt(denom * evals[k]);
      // Re-orthogonalize against earlier columns to clean rounding.
      for (Eigen::Index j = 0; j < k; ++j) u -= evecs.col(j).dot(u) * evecs.col(j);
      evecs.col(k) = u.normalized();
      ++good;
    }
    for (Eigen::Index k = good; k < d; ++k) evals[k] = 0.0;
    CompleteBasis(evecs, good, d);
  } else {
    const Eigen::MatrixXd cov = (x.transpose() * x) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) {
      throw NumericalError("covariance eigendecomposition failed", 0.0);
    }
    evals = es.eigenvalues().reverse().head(d);
    evecs = es.eigenvectors().rowwise().reverse().leftCols(d);
    const double top = std::max(evals[0], 0.0);
    Eigen::Index good = 0;
    while (good < d && evals[good] > kNullTolerance * top && evals[good] > 0.0) ++good;
    for (Eigen::Index k = good; k < d; ++k) evals[k] = 0.0;
    // The solver's null-space vectors are arbitrary; replace them with the
    // canonical completion so the basis does not depend on rounding.
    CompleteBasis(evecs, good, d);
  }
  FixSigns(evecs);
  model.basis = std::move(evecs);
  model.eigenvalues = std::move(evals);
  return model;
}

Eigen::VectorXd Project(const Eigen::VectorXd& v, const PcaModel& model) {
  Eigen::VectorXd x = model.basis.transpose() * ToModelSpace(v, model);
  if (model.convention == PcaConvention::kPaperScaled) {
    x.array() *= model.eigenvalues.array().sqrt();
  }
  return x;
}

Eigen::MatrixXd ProjectRows(const Eigen::MatrixXd& data, const PcaModel& model) {
  Eigen::MatrixXd out(data.rows(), model.dim());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    out.row(i) = Project(data.row(i).transpose(), model).transpose();
  }
  return out;
}

Eigen::VectorXd Reconstruct(const Eigen::VectorXd& x, const PcaModel& model) {
  if (x.size() != model.dim()) {
    throw ArgumentError("latent vector has length " + std::to_string(x.size()) +
                        ", model dimension is " + std::to_string(model.dim()));
  }
  Eigen::VectorXd coords = x;
  if (model.convention == PcaConvention::kPaperScaled) {
    for (Eigen::Index k = 0; k < coords.size(); ++k) {
      const double lambda = model.eigenvalues[k];
      if (lambda > 0.0) {
        coords[k] /= std::sqrt(lambda);
      } else if (coords[k] != 0.0) {
        throw DegenerateDirectionError(
            "latent coordinate " + std::to_string(k) +
            " is nonzero along a zero-variance direction");
      }
    }
  }
  Eigen::VectorXd v = model.basis * coords;
  if (model.weighted) {
    const Eigen::VectorXd s = MetricScale(model);
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = s[k] > 0.0 ? v[k] / s[k] : 0.0;
  }
  return model.mean + v;
}

double ResidualDistance(const Eigen::VectorXd& v, const PcaModel& model) {
  const Eigen::VectorXd c = ToModelSpace(v, model);
  const Eigen::VectorXd r = c - model.basis * (model.basis.transpose() * c);
  return r.norm();
}

}  // namespace lotdepth
