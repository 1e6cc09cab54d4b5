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

// Calibrated two-threshold outlier rule on (inner, outer) depths, DD-plot
// export and ROC / AUC evaluation.

#ifndef LOTDEPTH_CORE_OUTLIER_HPP_
#define LOTDEPTH_CORE_OUTLIER_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/depths.hpp"
#include "core/image_histogram.hpp"
#include "core/pipeline.hpp"

namespace lotdepth {

struct OutlierModel {
  double inner_threshold = 0.0;
  double outer_threshold = 0.0;
  double alpha = 0.05;
  // Calibration depths, ascending; used to normalize scores.
  std::vector<double> calibration_inner;
  std::vector<double> calibration_outer;
  // Set when n * alpha < 1 and the thresholds fell back to the minimum.
  bool fallback = false;
  std::string warning;
};

// Depth of the order statistic at position ceil((1 - alpha) n) under the
// nonincreasing order, so that a fraction alpha of the values falls
// strictly below it (when they are distinct). Throws ArgumentError on an
// empty input or alpha outside [0, 1).
double CalibrationThreshold(std::span<const double> depths, double alpha,
                            bool* fallback = nullptr);

OutlierModel CalibrateFromDepths(std::span<const double> inner,
                                 std::span<const double> outer, double alpha);
OutlierModel Calibrate(std::span<const ImageHistogram> calibration,
                       const Pipeline& pipeline, double alpha);

struct Verdict {
  bool is_outlier = false;
  double inner = 0.0;
  double outer = 0.0;
};

// Outlier iff inner < inner_threshold or outer < outer_threshold.
Verdict ClassifyDepths(double inner, double outer, const OutlierModel& model);
Verdict Classify(const ImageHistogram& image, const Pipeline& pipeline,
                 const OutlierModel& model);

enum class ScoreKind { kInner, kOuter, kMinQuantile };

// Depth-like score, lower = more outlying. kMinQuantile takes the smaller
// of the two calibration ECDF values #{cal <= depth} / n_cal.
double OutlierScore(double inner, double outer, const OutlierModel& model,
                    ScoreKind kind);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;  // flag scores <= threshold
};

struct RocResult {
  std::vector<RocPoint> points;  // starts at (0, 0), ends at (1, 1)
  double auc = 0.0;
};

// Sweeps the threshold over the distinct scores in increasing order.
// Tied scores move both rates at once, so the trapezoid counts ties as
// one half. Throws ArgumentError unless both classes are present.
RocResult RocAuc(std::span<const double> scores, std::span<const char> is_outlier);

// Header line "# inner_threshold=...,outer_threshold=...", then columns
// id,inner,outer,is_outlier,label (label empty when unknown).
std::string DdPlotCsv(const DepthReport& report, const OutlierModel& model,
                      std::span<const int> labels = {});

// Columns: fpr,tpr,threshold.
std::string RocCsv(const RocResult& roc);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_OUTLIER_HPP_
