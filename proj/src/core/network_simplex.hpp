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

// Primal network simplex for the balanced transportation problem on the
// complete bipartite graph (n sources, m sinks, no arc capacities).
//
// The spanning-tree bookkeeping (thread / reverse-thread / successor
// counts, block-search pricing, strongly feasible leaving-arc rule) follows
// the classic LEMON design. Two changes keep memory at O(n + m) instead of
// O(n m): arc costs are evaluated on demand through the `Cost` functor, and
// flows are stored per tree node (the flow on the node's predecessor arc),
// since non-tree arcs of an uncapacitated problem always carry zero flow.

#ifndef LOTDEPTH_CORE_NETWORK_SIMPLEX_HPP_
#define LOTDEPTH_CORE_NETWORK_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "core/errors.hpp"

namespace lotdepth {

enum class SimplexStatus { kOptimal, kMaxIterations, kInfeasible, kUnbounded };

struct SimplexFlow {
  int source = 0;
  int target = 0;
  double mass = 0.0;
};

struct SimplexOptions {
  std::int64_t max_iterations = std::numeric_limits<std::int64_t>::max();
};

struct SimplexSolution {
  SimplexStatus status = SimplexStatus::kOptimal;
  double cost = 0.0;
  // Positive flows, sorted by (source, target).
  std::vector<SimplexFlow> flows;
  // Dual potentials with f_i + g_j <= c_ij (up to rounding), equality on
  // basic arcs.
  std::vector<double> source_potential;
  std::vector<double> target_potential;
  std::int64_t iterations = 0;
};

namespace detail {

template <typename Cost>
class NetworkSimplexImpl {
 public:
  NetworkSimplexImpl(std::span<const double> supply,
                     std::span<const double> demand, const Cost& cost)
      : n_(static_cast<int>(supply.size())),
        m_(static_cast<int>(demand.size())),
        node_count_(n_ + m_),
        root_(n_ + m_),
        arc_count_(static_cast<std::int64_t>(n_) * m_),
        cost_(cost) {
    const std::size_t all = static_cast<std::size_t>(node_count_) + 1;
    supply_.assign(all, 0.0);
    pi_.assign(all, 0.0);
    flow_.assign(all, 0.0);
    parent_.assign(all, -1);
    thread_.assign(all, 0);
    rev_thread_.assign(all, 0);
    succ_num_.assign(all, 0);
    last_succ_.assign(all, 0);
    pred_.assign(all, -1);
    forward_.assign(all, 0);
    art_out_.assign(all, 0);
    long double balance = 0.0L;
    for (int i = 0; i < n_; ++i) {
      supply_[i] = supply[i];
      balance += supply[i];
    }
    for (int j = 0; j < m_; ++j) {
      supply_[n_ + j] = -demand[j];
      balance -= demand[j];
    }
    // Rounding imbalance is absorbed by the root.
    supply_[root_] = -static_cast<double>(balance);
  }

  SimplexStatus Run(std::int64_t max_iterations) {
    if (n_ == 0 || m_ == 0) return SimplexStatus::kInfeasible;
    double max_cost = 0.0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) max_cost = std::max(max_cost, std::fabs(cost_(i, j)));
    }
    art_cost_ = (max_cost + 1.0) * node_count_;

    parent_[root_] = -1;
    pred_[root_] = -1;
    thread_[root_] = 0;
    rev_thread_[0] = root_;
    succ_num_[root_] = node_count_ + 1;
    last_succ_[root_] = root_ - 1;
    pi_[root_] = 0.0;
    for (int u = 0; u < node_count_; ++u) {
      parent_[u] = root_;
      pred_[u] = arc_count_ + u;
      thread_[u] = u + 1;
      rev_thread_[u + 1] = u;
      succ_num_[u] = 1;
      last_succ_[u] = u;
      if (supply_[u] >= 0.0) {
        art_out_[u] = 1;
        forward_[u] = 1;
        pi_[u] = 0.0;
        flow_[u] = supply_[u];
      } else {
        art_out_[u] = 0;
        forward_[u] = 0;
        pi_[u] = art_cost_;
        flow_[u] = -supply_[u];
      }
    }

    block_size_ = std::max<std::int64_t>(
        static_cast<std::int64_t>(std::sqrt(static_cast<double>(arc_count_))),
        10);
    next_arc_ = 0;

    if (!InitialPivots()) return SimplexStatus::kUnbounded;
    iterations_ = 0;
    while (FindEnteringArc()) {
      if (iterations_++ >= max_iterations) return SimplexStatus::kMaxIterations;
      if (!Pivot()) return SimplexStatus::kUnbounded;
    }
    for (int u = 0; u < node_count_; ++u) {
      if (pred_[u] >= arc_count_) {
        if (flow_[u] > 1e-9) return SimplexStatus::kInfeasible;
        flow_[u] = 0.0;
      }
    }
    return SimplexStatus::kOptimal;
  }

  void Export(SimplexSolution& out) const {
    out.flows.clear();
    long double total = 0.0L;
    for (int u = 0; u < node_count_; ++u) {
      const std::int64_t e = pred_[u];
      if (e < 0 || e >= arc_count_ || !(flow_[u] > 0.0)) continue;
      const int i = static_cast<int>(e / m_);
      const int j = static_cast<int>(e % m_);
      out.flows.push_back({i, j, flow_[u]});
      total += static_cast<long double>(flow_[u]) * cost_(i, j);
    }
    std::sort(out.flows.begin(), out.flows.end(),
              [](const SimplexFlow& a, const SimplexFlow& b) {
                return a.source != b.source ? a.source < b.source
                                            : a.target < b.target;
              });
    out.cost = static_cast<double>(total);
    out.source_potential.resize(n_);
    out.target_potential.resize(m_);
    // Shift so that the smallest source potential is zero; the dual is
    // invariant to (f + c, g - c).
    double shift = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) shift = std::min(shift, -pi_[i]);
    for (int i = 0; i < n_; ++i) out.source_potential[i] = -pi_[i] - shift;
    for (int j = 0; j < m_; ++j) out.target_potential[j] = pi_[n_ + j] + shift;
    out.iterations = iterations_;
  }

  // Largest violation of f_i + g_j <= c_ij over all arcs.
  double DualViolation() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        worst = std::max(worst, -(cost_(i, j) + pi_[i] - pi_[n_ + j]));
      }
    }
    return worst;
  }

 private:
  int Source(std::int64_t e) const {
    if (e < arc_count_) return static_cast<int>(e / m_);
    const int u = static_cast<int>(e - arc_count_);
    return art_out_[u] ? u : root_;
  }
  int Target(std::int64_t e) const {
    if (e < arc_count_) return n_ + static_cast<int>(e % m_);
    const int u = static_cast<int>(e - arc_count_);
    return art_out_[u] ? root_ : u;
  }
  double ArcCost(std::int64_t e) const {
    if (e < arc_count_) {
      return cost_(static_cast<int>(e / m_), static_cast<int>(e % m_));
    }
    return art_out_[e - arc_count_] ? 0.0 : art_cost_;
  }
  bool InTree(int i, int j, std::int64_t e) const {
    return pred_[i] == e || pred_[n_ + j] == e;
  }

  // Block search pivot rule: scan blocks of arcs cyclically and take the
  // most negative reduced cost of the first block that has one.
  bool FindEnteringArc() {
    constexpr double kRelTol = 64.0 * std::numeric_limits<double>::epsilon();
    double best = 0.0;
    double best_scale = 0.0;
    std::int64_t best_arc = -1;
    std::int64_t e = next_arc_;
    int i = static_cast<int>(e / m_);
    int j = static_cast<int>(e % m_);
    std::int64_t left = block_size_;
    for (std::int64_t scanned = 0; scanned < arc_count_; ++scanned) {
      const double c = cost_(i, j);
      const double rc = c + pi_[i] - pi_[n_ + j];
      if (rc < best && !InTree(i, j, e)) {
        best = rc;
        best_arc = e;
        best_scale = std::max({std::fabs(c), std::fabs(pi_[i]), std::fabs(pi_[n_ + j])});
      }
      ++e;
      if (++j == m_) {
        j = 0;
        if (++i == n_) {
          i = 0;
          e = 0;
        }
      }
      if (--left == 0) {
        if (best_arc >= 0 && best < -kRelTol * best_scale) {
          in_arc_ = best_arc;
          next_arc_ = e;
          return true;
        }
        left = block_size_;
      }
    }
    if (best_arc >= 0 && best < -kRelTol * best_scale) {
      in_arc_ = best_arc;
      next_arc_ = e;
      return true;
    }
    return false;
  }

  bool InitialPivots() {
    // Cheapest incoming arc of every sink.
    std::vector<std::int64_t> arcs;
    arcs.reserve(m_);
    for (int j = 0; j < m_; ++j) {
      double best = std::numeric_limits<double>::infinity();
      std::int64_t arg = -1;
      for (int i = 0; i < n_; ++i) {
        const double c = cost_(i, j);
        if (c < best) {
          best = c;
          arg = static_cast<std::int64_t>(i) * m_ + j;
        }
      }
      if (arg >= 0) arcs.push_back(arg);
    }
    for (std::int64_t a : arcs) {
      const int i = static_cast<int>(a / m_);
      const int j = static_cast<int>(a % m_);
      if (InTree(i, j, a)) continue;
      if (cost_(i, j) + pi_[i] - pi_[n_ + j] >= 0.0) continue;
      in_arc_ = a;
      if (!Pivot()) return false;
    }
    return true;
  }

  bool Pivot() {
    FindJoinNode();
    if (!FindLeavingArc()) return false;
    ChangeFlow();
    UpdateTreeStructure();
    UpdatePotential();
    return true;
  }

  void FindJoinNode() {
    int u = Source(in_arc_);
    int v = Target(in_arc_);
    while (u != v) {
      if (succ_num_[u] < succ_num_[v]) {
        u = parent_[u];
      } else {
        v = parent_[v];
      }
    }
    join_ = u;
  }

  // Returns false when the cycle has no blocking arc (unbounded).
  bool FindLeavingArc() {
    const int first = Source(in_arc_);
    const int second = Target(in_arc_);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    delta_ = kInf;
    int result = 0;
    for (int u = first; u != join_; u = parent_[u]) {
      const double d = forward_[u] ? flow_[u] : kInf;
      if (d < delta_) {
        delta_ = d;
        u_out_ = u;
        result = 1;
      }
    }
    for (int u = second; u != join_; u = parent_[u]) {
      const double d = forward_[u] ? kInf : flow_[u];
      if (d <= delta_) {
        delta_ = d;
        u_out_ = u;
        result = 2;
      }
    }
    if (result == 1) {
      u_in_ = first;
      v_in_ = second;
    } else {
      u_in_ = second;
      v_in_ = first;
    }
    return result != 0;
  }

  void ChangeFlow() {
    in_flow_ = 0.0;
    if (delta_ > 0.0) {
      const double val = delta_;
      in_flow_ = val;
      for (int u = Source(in_arc_); u != join_; u = parent_[u]) {
        flow_[u] += forward_[u] ? -val : val;
      }
      for (int u = Target(in_arc_); u != join_; u = parent_[u]) {
        flow_[u] += forward_[u] ? val : -val;
      }
    }
  }

  void UpdateTreeStructure() {
    int u = last_succ_[u_in_];
    const int old_rev_thread = rev_thread_[u_out_];
    const int old_succ_num = succ_num_[u_out_];
    const int old_last_succ = last_succ_[u_out_];
    v_out_ = parent_[u_out_];
    int right = thread_[u];
    int last;
    if (old_rev_thread == v_in_) {
      last = thread_[last_succ_[u_out_]];
    } else {
      last = thread_[v_in_];
    }

    // Re-hang the stem between u_in and u_out.
    int stem = u_in_;
    thread_[v_in_] = stem;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    int par_stem = v_in_;
    while (stem != u_out_) {
      const int new_stem = parent_[stem];
      thread_[u] = new_stem;
      dirty_revs_.push_back(u);
      const int w = rev_thread_[stem];
      thread_[w] = right;
      rev_thread_[right] = w;
      parent_[stem] = par_stem;
      par_stem = stem;
      stem = new_stem;
      u = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem]
                                                   : last_succ_[stem];
      right = thread_[u];
    }
    parent_[u_out_] = par_stem;
    thread_[u] = last;
    rev_thread_[last] = u;
    last_succ_[u_out_] = u;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = right;
      rev_thread_[right] = old_rev_thread;
    }
    for (int d : dirty_revs_) rev_thread_[thread_[d]] = d;

    // Shift predecessor arcs (and their flows) along the reversed stem.
    int tmp_sc = 0;
    const int tmp_ls = last_succ_[u_out_];
    u = u_out_;
    while (u != u_in_) {
      const int w = parent_[u];
      pred_[u] = pred_[w];
      forward_[u] = !forward_[w];
      flow_[u] = flow_[w];
      tmp_sc += succ_num_[u] - succ_num_[w];
      succ_num_[u] = tmp_sc;
      last_succ_[w] = tmp_ls;
      u = w;
    }
    pred_[u_in_] = in_arc_;
    forward_[u_in_] = (u_in_ == Source(in_arc_));
    flow_[u_in_] = in_flow_;
    succ_num_[u_in_] = old_succ_num;

    int up_limit_in = -1;
    int up_limit_out = -1;
    if (last_succ_[join_] == v_in_) {
      up_limit_out = join_;
    } else {
      up_limit_in = join_;
    }
    for (u = v_in_; u != up_limit_in && last_succ_[u] == v_in_; u = parent_[u]) {
      last_succ_[u] = last_succ_[u_out_];
    }
    if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
      for (u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ;
           u = parent_[u]) {
        last_succ_[u] = old_rev_thread;
      }
    } else {
      for (u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ;
           u = parent_[u]) {
        last_succ_[u] = last_succ_[u_out_];
      }
    }
    for (u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
    for (u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
  }

  void UpdatePotential() {
    const double c = ArcCost(pred_[u_in_]);
    const double sigma = forward_[u_in_] ? pi_[v_in_] - pi_[u_in_] - c
                                         : pi_[v_in_] - pi_[u_in_] + c;
    const int end = thread_[last_succ_[u_in_]];
    for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
  }

  const int n_;
  const int m_;
  const int node_count_;
  const int root_;
  const std::int64_t arc_count_;
  const Cost& cost_;
  double art_cost_ = 0.0;

  std::vector<double> supply_, pi_, flow_;
  std::vector<int> parent_, thread_, rev_thread_, succ_num_, last_succ_;
  std::vector<std::int64_t> pred_;
  std::vector<char> forward_, art_out_;
  std::vector<int> dirty_revs_;

  std::int64_t block_size_ = 10;
  std::int64_t next_arc_ = 0;
  std::int64_t iterations_ = 0;

  std::int64_t in_arc_ = -1;
  int join_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
  double delta_ = 0.0;
  double in_flow_ = 0.0;
};

}  // namespace detail

// Solves min sum_ij c(i, j) pi_ij subject to row sums `supply` and column
// sums `demand`. `cost(i, j)` is called for 0 <= i < n, 0 <= j < m.
// Throws NumericalError when the iteration budget runs out; the error's gap
// is the largest dual infeasibility at that point.
template <typename Cost>
SimplexSolution SolveNetworkSimplex(std::span<const double> supply,
                                    std::span<const double> demand,
                                    const Cost& cost,
                                    const SimplexOptions& options = {}) {
  if (supply.empty() || demand.empty()) {
    throw ArgumentError("network simplex needs nonempty supply and demand");
  }
  detail::NetworkSimplexImpl<Cost> impl(supply, demand, cost);
  SimplexSolution out;
  out.status = impl.Run(options.max_iterations);
  switch (out.status) {
    case SimplexStatus::kOptimal:
      impl.Export(out);
      return out;
    case SimplexStatus::kMaxIterations:
      throw NumericalError(
          "network simplex hit its iteration budget before optimality",
          impl.DualViolation());
    case SimplexStatus::kInfeasible:
      throw NumericalError("network simplex found the problem infeasible",
                           impl.DualViolation());
    case SimplexStatus::kUnbounded:
      break;
  }
  throw NumericalError("network simplex found the problem unbounded",
                       std::numeric_limits<double>::infinity());
}

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_NETWORK_SIMPLEX_HPP_
