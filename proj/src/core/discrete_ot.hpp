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

// Optimal transport between image histograms with squared Euclidean ground
// cost on pixel coordinates.

#ifndef LOTDEPTH_CORE_DISCRETE_OT_HPP_
#define LOTDEPTH_CORE_DISCRETE_OT_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "core/image_histogram.hpp"

namespace lotdepth {

// One nonzero entry of a coupling, indexed by pixel on each grid.
struct CouplingEntry {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;

  friend bool operator==(const CouplingEntry&, const CouplingEntry&) = default;
};

struct TransportPlan {
  ImageHistogram source;
  ImageHistogram target;
  // Sorted by (source, target); zero entries omitted.
  std::vector<CouplingEntry> coupling;
  // sum_ij pi_ij |omega_i - omega'_j|^2 of `coupling`.
  double cost = 0.0;

  std::vector<double> RowSums() const;
  std::vector<double> ColumnSums() const;
  // Cost recomputed from the coupling.
  double RecomputeCost() const;
};

// T(omega_i) for every source pixel.
struct MongeMapGrid {
  PixelGrid source_grid;
  std::vector<Point2> images;
};

struct ExactOptions {
  std::int64_t max_iterations = std::numeric_limits<std::int64_t>::max();
};

// Exact W2^2 plan by network simplex on the supports of a and b. The
// result is a vertex of the transport polytope and is deterministic.
TransportPlan SolveExact(const ImageHistogram& a, const ImageHistogram& b,
                         const ExactOptions& options = {});

enum class EntropicMode {
  kAuto,     // log domain below log_domain_threshold, scaling above
  kScaling,  // may throw UnderflowError
  kLog,
};

struct EntropicOptions {
  double epsilon = 1.0;
  int max_iter = 10000;
  double tol = 1e-9;
  EntropicMode mode = EntropicMode::kAuto;
  double log_domain_threshold = 0.01;
};

// Sinkhorn plan between the supports of a and b (smooth the inputs first if
// strict positivity on the full grid is wanted). `cost` of the returned
// plan is the unregularized transport cost. Throws NumericalError when the
// marginal violation stays above tol after max_iter iterations.
TransportPlan SolveEntropic(const ImageHistogram& a, const ImageHistogram& b,
                            const EntropicOptions& options);

// Warm-started Sinkhorn along a decreasing epsilon schedule. Returns the
// plan at every stage (last one is the final plan).
std::vector<TransportPlan> SolveEntropicSchedule(
    const ImageHistogram& a, const ImageHistogram& b,
    std::span<const double> epsilons, const EntropicOptions& options);

// Geometric schedule with `stages` values from `start` to `end`.
std::vector<double> GeometricSchedule(double start, double end, int stages);

// Barycentric projection T(omega_i) = sum_j pi_ij omega'_j / sum_j pi_ij.
// Source pixels without mass map to themselves.
MongeMapGrid BarycentricMap(const TransportPlan& plan);

// True when every source pixel sends its mass to a single target pixel,
// i.e. the plan is induced by a map.
bool IsMapPlan(const TransportPlan& plan);

// sqrt(SolveExact(a, b).cost).
double Wasserstein(const ImageHistogram& a, const ImageHistogram& b);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_DISCRETE_OT_HPP_
