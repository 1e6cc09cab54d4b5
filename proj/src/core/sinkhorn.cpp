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

#include "core/sinkhorn.hpp"

#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace lotdepth {

namespace {

void CheckInputs(const RowMatrix& cost, const Eigen::VectorXd& a,
                 const Eigen::VectorXd& b, const SinkhornOptions& options) {
  if (cost.rows() != a.size() || cost.cols() != b.size()) {
    throw ArgumentError("Sinkhorn: cost matrix shape does not match marginals");
  }
  if (!(options.epsilon > 0.0)) throw ArgumentError("Sinkhorn: epsilon must be > 0");
  if ((a.array() <= 0.0).any() || (b.array() <= 0.0).any()) {
    throw ArgumentError("Sinkhorn: marginals must be strictly positive");
  }
}

}  // namespace

SinkhornResult SinkhornLog(const RowMatrix& cost, const Eigen::VectorXd& a,
                           const Eigen::VectorXd& b,
                           const SinkhornOptions& options,
                           const Eigen::VectorXd* warm_g) {
  CheckInputs(cost, a, b, options);
  const Eigen::Index n = cost.rows();
  const Eigen::Index m = cost.cols();
  const double eps = options.epsilon;
  const Eigen::VectorXd log_a = a.array().log();
  const Eigen::VectorXd log_b = b.array().log();

  SinkhornResult r;
  r.f = Eigen::VectorXd::Zero(n);
  r.g = warm_g != nullptr && warm_g->size() == m ? *warm_g
                                                   : Eigen::VectorXd::Zero(m);
  Eigen::VectorXd col_max(m), col_sum(m);
  int it = 0;
  for (; it < options.max_iter; ++it) {
    // Row sweep. The row sums of the current plan are a_i exp((f_i - f'_i)/eps),
    // which gives the marginal error for free.
    double row_err = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ci = cost.row(i);
      double mx = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < m; ++j) mx = std::max(mx, r.g[j] - ci[j]);
      double s = 0.0;
      for (Eigen::Index j = 0; j < m; ++j) s += std::exp((r.g[j] - ci[j] - mx) / eps);
      const double f_new = eps * log_a[i] - mx - eps * std::log(s);
      if (it > 0) row_err += a[i] * std::fabs(std::expm1((r.f[i] - f_new) / eps));
      r.f[i] = f_new;
    }
    if (it > 0 && row_err < options.tol) r.converged = true;
    // Column sweep, streamed over rows to keep row-major access.
    col_max.setConstant(-std::numeric_limits<double>::infinity());
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ci = cost.row(i);
      for (Eigen::Index j = 0; j < m; ++j) col_max[j] = std::max(col_max[j], r.f[i] - ci[j]);
    }
    col_sum.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ci = cost.row(i);
      for (Eigen::Index j = 0; j < m; ++j) {
        col_sum[j] += std::exp((r.f[i] - ci[j] - col_max[j]) / eps);
      }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      r.g[j] = eps * log_b[j] - col_max[j] - eps * std::log(col_sum[j]);
    }
    if (r.converged) {
      ++it;
      break;
    }
  }
  r.iterations = it;
  // Exact row error of the returned potentials.
  double final_err = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ci = cost.row(i);
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) s += std::exp((r.f[i] + r.g[j] - ci[j]) / eps);
    final_err += std::fabs(s - a[i]);
  }
  r.marginal_error = final_err;
  r.converged = final_err < options.tol || r.converged;
  return r;
}

SinkhornResult SinkhornScaling(const RowMatrix& cost, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b,
                               const SinkhornOptions& options,
                               const Eigen::VectorXd* warm_g) {
  CheckInputs(cost, a, b, options);
  const double eps = options.epsilon;
  // std::exp rather than Eigen's vectorized exp, which clamps large negative
  // arguments to the smallest normal instead of returning 0.
  const RowMatrix kernel =
      (-cost.array() / eps).unaryExpr([](double x) { return std::exp(x); }).matrix();
  for (Eigen::Index i = 0; i < kernel.rows(); ++i) {
    if (!(kernel.row(i).maxCoeff() > 0.0)) {
      throw UnderflowError(
          "Sinkhorn kernel underflows at epsilon " + std::to_string(eps) +
          "; use the log-domain solver or a larger epsilon");
    }
  }
  Eigen::VectorXd v = Eigen::VectorXd::Ones(b.size());
  if (warm_g != nullptr && warm_g->size() == b.size()) {
    v = (warm_g->array() / eps).unaryExpr([](double x) { return std::exp(x); }).matrix();
  }
  Eigen::VectorXd u = Eigen::VectorXd::Ones(a.size());
  SinkhornResult r;
  int it = 0;
  for (; it < options.max_iter; ++it) {
    const Eigen::VectorXd kv = kernel * v;
    const Eigen::VectorXd u_new = a.array() / kv.array();
    if (!u_new.allFinite() || (kv.array() <= 0.0).any()) {
      throw UnderflowError("Sinkhorn scalings left the double range at epsilon " +
                           std::to_string(eps) + "; use the log-domain solver");
    }
    double err = 0.0;
    if (it > 0) err = (u.array() * kv.array() - a.array()).abs().sum();
    u = u_new;
    const Eigen::VectorXd ktu = kernel.transpose() * u;
    v = b.array() / ktu.array();
    if (!v.allFinite() || (ktu.array() <= 0.0).any()) {
      throw UnderflowError("Sinkhorn scalings left the double range at epsilon " +
                           std::to_string(eps) + "; use the log-domain solver");
    }
    if (it > 0 && err < options.tol) {
      r.converged = true;
      ++it;
      break;
    }
  }
  r.iterations = it;
  r.f = eps * u.array().log().matrix();
  r.g = eps * v.array().log().matrix();
  r.marginal_error = (u.array() * (kernel * v).array() - a.array()).abs().sum();
  r.converged = r.converged || r.marginal_error < options.tol;
  return r;
}

namespace {

// f_j = eps log a_j - eps LSE_i((g_i - C_ji) / eps); fills the row-softmax
// matrix p (rows sum to 1) and returns the semi-dual value.
double SemiDual(const RowMatrix& cost, const Eigen::VectorXd& log_a,
                const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                const Eigen::VectorXd& g, double eps, Eigen::VectorXd& f,
                RowMatrix* p) {
  const Eigen::Index m = cost.rows();
  const Eigen::Index n = cost.cols();
  long double value = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) value += b[i] * g[i];
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto cj = cost.row(j);
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) mx = std::max(mx, g[i] - cj[i]);
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double e = std::exp((g[i] - cj[i] - mx) / eps);
      if (p != nullptr) (*p)(j, i) = e;
      s += e;
    }
    if (p != nullptr) p->row(j) /= s;
    f[j] = eps * log_a[j] - mx - eps * std::log(s);
    value += a[j] * f[j];
  }
  return static_cast<double>(value);
}

}  // namespace

SinkhornResult SemiDualNewton(const RowMatrix& cost, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b,
                              const SinkhornOptions& options,
                              const Eigen::VectorXd* warm_g) {
  CheckInputs(cost, a, b, options);
  const Eigen::Index n = cost.cols();
  const double eps = options.epsilon;
  const Eigen::VectorXd log_a = a.array().log();
  SinkhornResult r;
  r.f.resize(cost.rows());
  r.g = warm_g != nullptr && warm_g->size() == n ? *warm_g
                                                   : Eigen::VectorXd::Zero(n);
  RowMatrix p(cost.rows(), n);
  double value = SemiDual(cost, log_a, a, b, r.g, eps, r.f, &p);
  Eigen::VectorXd f_trial(cost.rows());
  int it = 0;
  for (; it < options.max_iter; ++it) {
    // Column sums of the plan pi = diag(a) p.
    const Eigen::VectorXd col = p.transpose() * a;
    const Eigen::VectorXd grad = b - col;
    r.marginal_error = grad.cwiseAbs().sum();
    if (r.marginal_error < options.tol) {
      r.converged = true;
      break;
    }
    // Negative Hessian: (diag(col) - p^T diag(a) p) / eps, PSD with the
    // constant vector in its kernel; a tiny ridge fixes the gauge.
    Eigen::MatrixXd h = -(p.transpose() * a.asDiagonal() * p);
    h.diagonal() += col;
    h /= eps;
    const double ridge = 1e-12 * (h.trace() / static_cast<double>(n)) + 1e-300;
    h.diagonal().array() += ridge;
    const Eigen::VectorXd step = h.ldlt().solve(grad);
    if (!step.allFinite()) throw NumericalError("Newton step is not finite", r.marginal_error);
    const double slope = grad.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
      const Eigen::VectorXd g_trial = r.g + t * step;
      const double v = SemiDual(cost, log_a, a, b, g_trial, eps, f_trial, nullptr);
      if (v >= value + 1e-4 * t * slope) {
        r.g = g_trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no ascent left at double precision
    value = SemiDual(cost, log_a, a, b, r.g, eps, r.f, &p);
  }
  r.iterations = it;
  if (!r.converged) {
    r.marginal_error = (b - p.transpose() * a).cwiseAbs().sum();
    r.converged = r.marginal_error < options.tol;
  }
  return r;
}

RowMatrix PlanFromPotentials(const RowMatrix& cost, const Eigen::VectorXd& f,
                             const Eigen::VectorXd& g, double epsilon) {
  RowMatrix plan(cost.rows(), cost.cols());
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      plan(i, j) = std::exp((f[i] + g[j] - cost(i, j)) / epsilon);
    }
  }
  return plan;
}

double MarginalViolation(const RowMatrix& plan, const Eigen::VectorXd& a,
                         const Eigen::VectorXd& b) {
  return (plan.rowwise().sum() - a).cwiseAbs().sum() +
         (plan.colwise().sum().transpose() - b).cwiseAbs().sum();
}

}  // namespace lotdepth
