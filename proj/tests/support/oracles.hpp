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


// Independent reference implementations used only by the tests. None of
// these share code with the library.

#ifndef LOTDEPTH_TESTS_SUPPORT_ORACLES_HPP_
#define LOTDEPTH_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

// Dense tableau simplex for min c.x s.t. A x = b, x >= 0, b >= 0, with a
// phase-one on artificial variables and Bland's rule throughout, which
// cannot cycle. Returns the optimal objective. Small problems only.
inline double DenseLpMinimize(std::vector<std::vector<double>> a,
                              std::vector<double> b, const std::vector<double>& c) {
  const std::size_t rows = a.size();
  const std::size_t vars = c.size();
  const std::size_t cols = vars + rows;  // originals + artificials
  // Tableau rows: constraints, then the phase objective.
  std::vector<std::vector<double>> t(rows + 1, std::vector<double>(cols + 1, 0.0));
  std::vector<std::size_t> basis(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    if (b[r] < 0) {
      for (double& v : a[r]) v = -v;
      b[r] = -b[r];
    }
    for (std::size_t j = 0; j < vars; ++j) t[r][j] = a[r][j];
    t[r][vars + r] = 1.0;
    t[r][cols] = b[r];
    basis[r] = vars + r;
  }
  const double tol = 1e-12;
  auto pivot = [&](std::size_t pr, std::size_t pc) {
    const double p = t[pr][pc];
    for (double& v : t[pr]) v /= p;
    for (std::size_t r = 0; r <= rows; ++r) {
      if (r == pr || t[r][pc] == 0.0) continue;
      const double f = t[r][pc];
      for (std::size_t j = 0; j <= cols; ++j) t[r][j] -= f * t[pr][j];
    }
    basis[pr] = pc;
  };
  // Runs Bland's rule on the objective row, restricted to allowed columns.
  auto run = [&](std::size_t allowed) {
    for (int guard = 0; guard < 100000; ++guard) {
      std::size_t enter = cols;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (t[rows][j] < -tol) {
          enter = j;
          break;
        }
      }
      if (enter == cols) return;
      std::size_t leave = rows;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < rows; ++r) {
        if (t[r][enter] > tol) {
          const double ratio = t[r][cols] / t[r][enter];
          if (ratio < best - tol || (std::fabs(ratio - best) <= tol && basis[r] < basis[leave])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave == rows) throw std::runtime_error("LP unbounded");
      pivot(leave, enter);
    }
    throw std::runtime_error("LP iteration limit");
  };
  // Phase one: minimize the sum of artificials.
  for (std::size_t j = 0; j <= cols; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < rows; ++r) s += t[r][j];
    t[rows][j] = j >= vars && j < cols ? 0.0 : -s;
  }
  run(cols);
  if (-t[rows][cols] > 1e-9) throw std::runtime_error("LP infeasible");
  // Drive remaining artificials out of the basis where possible.
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < vars) continue;
    for (std::size_t j = 0; j < vars; ++j) {
      if (std::fabs(t[r][j]) > 1e-9) {
        pivot(r, j);
        break;
      }
    }
  }
  // Phase two objective in terms of the current basis.
  for (std::size_t j = 0; j <= cols; ++j) t[rows][j] = j < vars ? c[j] : 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    if (basis[r] < vars && c[basis[r]] != 0.0) {
      const double f = c[basis[r]];
      for (std::size_t j = 0; j <= cols; ++j) t[rows][j] -= f * t[r][j];
    }
  }
  run(vars);
  return -t[rows][cols];
}

// Transport LP between weights a and b with cost(i, j).
inline double TransportLp(const std::vector<double>& a, const std::vector<double>& b,
                          const std::function<double(std::size_t, std::size_t)>& cost) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> r(n * m, 0.0);
    for (std::size_t j = 0; j < m; ++j) r[i * m + j] = 1.0;
    rows.push_back(r);
    rhs.push_back(a[i]);
  }
  // The last column constraint is implied by the others.
  for (std::size_t j = 0; j + 1 < m; ++j) {
    std::vector<double> r(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) r[i * m + j] = 1.0;
    rows.push_back(r);
    rhs.push_back(b[j]);
  }
  std::vector<double> c(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) c[i * m + j] = cost(i, j);
  }
  return DenseLpMinimize(rows, rhs, c);
}

// Hungarian algorithm (shortest augmenting path with potentials) for a
// square minimum-cost assignment. result[i] is the column of row i.
inline std::vector<std::size_t> Hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> result(n);
  for (std::size_t j = 1; j <= n; ++j) result[p[j] - 1] = j - 1;
  return result;
}

inline double AssignmentCost(const std::vector<std::vector<double>>& cost,
                             const std::vector<std::size_t>& assignment) {
  double s = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) s += cost[i][assignment[i]];
  return s;
}

// One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
inline double KsStatistic(std::vector<double> sample,
                          const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// Asymptotic p-value P(D_n >= d) with Stephens' small-sample correction.
inline double KsPValue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

// Mann-Whitney estimate of P(score_outlier < score_inlier) + P(tie) / 2.
inline double PairwiseAuc(const std::vector<double>& scores, const std::vector<int>& truth) {
  double num = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!truth[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (truth[j]) continue;
      pairs += 1.0;
      if (scores[i] < scores[j]) {
        num += 1.0;
      } else if (scores[i] == scores[j]) {
        num += 0.5;
      }
    }
  }
  return num / pairs;
}

}  // namespace oracle

#endif  // LOTDEPTH_TESTS_SUPPORT_ORACLES_HPP_
