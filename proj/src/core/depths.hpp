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

// Inner and outer depths of images, center-outward order statistics and
// the five-image summary.

#ifndef LOTDEPTH_CORE_DEPTHS_HPP_
#define LOTDEPTH_CORE_DEPTHS_HPP_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/image_histogram.hpp"
#include "core/mk_quantiles.hpp"
#include "core/pipeline.hpp"

namespace lotdepth {

struct DepthRecord {
  std::size_t id = 0;
  double inner = 0.0;  // in [0, 1/2]
  double outer = 1.0;  // in (0, 1]
  Eigen::VectorXd rank;    // entropic rank of the latent
  Eigen::VectorXd latent;
  double residual = 0.0;

  double rank_norm() const { return rank.norm(); }
};

struct DepthReport {
  std::vector<DepthRecord> records;
};

// 1 / (1 + residual).
double OuterDepthFromResidual(double residual);

DepthRecord DepthOfLatent(std::size_t id, const Eigen::VectorXd& latent,
                          double residual, const QuantileModel& model);

double InnerDepth(const ImageHistogram& image, const Pipeline& pipeline);
double OuterDepth(const ImageHistogram& image, const Pipeline& pipeline);
// Inner depth through the hard rank; diagnostics only.
double HardInnerDepth(const Eigen::VectorXd& latent, const QuantileModel& model);

// Depths of new images (parallel over images); ids are input positions.
DepthReport ComputeDepths(std::span<const ImageHistogram> images,
                          const Pipeline& pipeline);
// Depths of the stored training latents.
DepthReport TrainingDepths(const Pipeline& pipeline);

enum class DepthKey { kInner, kOuter };

// Positions into `depths` sorted by nonincreasing depth, ties kept in
// input order.
std::vector<std::size_t> OrderStatistics(std::span<const double> depths);
// Record ids in that order.
std::vector<std::size_t> OrderStatistics(const DepthReport& report, DepthKey key);

// 1-based positions 1, ceil(n/4), ceil(n/2), ceil(3n/4), n. Throws
// ArgumentError when n < 5.
std::array<std::size_t, 5> FiveSummaryPositions(std::size_t n);
// Record ids at those positions of the order statistics.
std::array<std::size_t, 5> FiveSummary(const DepthReport& report,
                                       DepthKey key = DepthKey::kInner);

// Columns: id,inner,outer,rank_norm,residual.
std::string DepthReportCsv(const DepthReport& report);
std::string DepthReportJson(const DepthReport& report);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_DEPTHS_HPP_
