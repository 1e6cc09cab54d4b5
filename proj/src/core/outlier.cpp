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

#include "core/outlier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "core/errors.hpp"
#include "core/io_util.hpp"

namespace lotdepth {

double CalibrationThreshold(std::span<const double> depths, double alpha,
                            bool* fallback) {
  if (depths.empty()) throw ArgumentError("calibration set is empty");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ArgumentError("alpha must be in [0, 1)");
  const std::size_t n = depths.size();
  std::vector<double> sorted(depths.begin(), depths.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // Guard the ceiling against (1 - 0.05) * 100 = 95.00000000000001.
  const double raw = (1.0 - alpha) * static_cast<double>(n);
  std::size_t pos = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  pos = std::clamp<std::size_t>(pos, 1, n);
  if (fallback != nullptr) *fallback = static_cast<double>(n) * alpha < 1.0;
  return sorted[pos - 1];
}

OutlierModel CalibrateFromDepths(std::span<const double> inner,
                                 std::span<const double> outer, double alpha) {
  if (inner.size() != outer.size()) {
    throw ArgumentError("inner and outer calibration depths differ in length");
  }
  OutlierModel m;
  m.alpha = alpha;
  bool fb = false;
  m.inner_threshold = CalibrationThreshold(inner, alpha, &fb);
  m.outer_threshold = CalibrationThreshold(outer, alpha, nullptr);
  m.fallback = fb;
  if (fb) {
    m.warning = "n * alpha < 1: thresholds set to the minimum calibration depths";
  }
  m.calibration_inner.assign(inner.begin(), inner.end());
  m.calibration_outer.assign(outer.begin(), outer.end());
  std::sort(m.calibration_inner.begin(), m.calibration_inner.end());
  std::sort(m.calibration_outer.begin(), m.calibration_outer.end());
  return m;
}

OutlierModel Calibrate(std::span<const ImageHistogram> calibration,
                       const Pipeline& pipeline, double alpha) {
  const DepthReport report = ComputeDepths(calibration, pipeline);
  std::vector<double> inner, outer;
  for (const auto& r : report.records) {
    inner.push_back(r.inner);
    outer.push_back(r.outer);
  }
  return CalibrateFromDepths(inner, outer, alpha);
}

Verdict ClassifyDepths(double inner, double outer, const OutlierModel& model) {
  return {inner < model.inner_threshold || outer < model.outer_threshold, inner,
          outer};
}

Verdict Classify(const ImageHistogram& image, const Pipeline& pipeline,
                 const OutlierModel& model) {
  const Embedding e = EmbedImage(image, pipeline);
  const DepthRecord r = DepthOfLatent(0, e.latent, e.residual, pipeline.quantiles);
  return ClassifyDepths(r.inner, r.outer, model);
}

namespace {

double Ecdf(const std::vector<double>& sorted, double x) {
  if (sorted.empty()) throw ArgumentError("model has no calibration depths");
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

}  // namespace

double OutlierScore(double inner, double outer, const OutlierModel& model,
                    ScoreKind kind) {
  switch (kind) {
    case ScoreKind::kInner:
      return inner;
    case ScoreKind::kOuter:
      return outer;
    case ScoreKind::kMinQuantile:
      break;
  }
  return std::min(Ecdf(model.calibration_inner, inner),
                  Ecdf(model.calibration_outer, outer));
}

RocResult RocAuc(std::span<const double> scores, std::span<const char> is_outlier) {
  if (scores.size() != is_outlier.size()) {
    throw ArgumentError("scores and labels differ in length");
  }
  std::size_t pos = 0;
  for (char c : is_outlier) pos += c ? 1 : 0;
  const std::size_t neg = scores.size() - pos;
  if (pos == 0 || neg == 0) throw ArgumentError("ROC needs both classes");
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  RocResult roc;
  roc.points.push_back({0.0, 0.0, -std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  long double area = 0.0L;  // in units of (pos * neg)
  std::size_t k = 0;
  while (k < order.size()) {
    const double t = scores[order[k]];
    std::size_t dtp = 0, dfp = 0;
    while (k < order.size() && scores[order[k]] == t) {
      if (is_outlier[order[k]]) ++dtp; else ++dfp;
      ++k;
    }
    area += static_cast<long double>(dfp) * (2.0L * tp + dtp) / 2.0L;
    tp += dtp;
    fp += dfp;
    roc.points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos, t});
  }
  roc.auc = static_cast<double>(area / (static_cast<long double>(pos) * neg));
  return roc;
}

std::string DdPlotCsv(const DepthReport& report, const OutlierModel& model,
                      std::span<const int> labels) {
  if (!labels.empty() && labels.size() != report.records.size()) {
    throw ArgumentError("label count does not match the report");
  }
  std::string out = "# inner_threshold=" + FormatDouble(model.inner_threshold) +
                    ",outer_threshold=" + FormatDouble(model.outer_threshold) + "\n";
  out += "id,inner,outer,is_outlier,label\n";
  for (std::size_t i = 0; i < report.records.size(); ++i) {
    const auto& r = report.records[i];
    const Verdict v = ClassifyDepths(r.inner, r.outer, model);
    out += std::to_string(r.id) + "," + FormatDouble(r.inner) + "," +
           FormatDouble(r.outer) + "," + (v.is_outlier ? "1" : "0") + "," +
           (labels.empty() ? std::string() : std::to_string(labels[i])) + "\n";
  }
  return out;
}

std::string RocCsv(const RocResult& roc) {
  std::string out = "fpr,tpr,threshold\n";
  for (const auto& p : roc.points) {
    out += FormatDouble(p.fpr) + "," + FormatDouble(p.tpr) + "," +
           FormatDouble(p.threshold) + "\n";
  }
  return out;
}

}  // namespace lotdepth
