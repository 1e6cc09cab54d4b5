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

#include "core/depths.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/errors.hpp"
#include "core/io_util.hpp"
#include "core/parallel.hpp"
#include "json.hpp"

namespace lotdepth {

double OuterDepthFromResidual(double residual) {
  if (!(residual >= 0.0)) throw DomainError("residual must be nonnegative");
  return 1.0 / (1.0 + residual);
}

DepthRecord DepthOfLatent(std::size_t id, const Eigen::VectorXd& latent,
                          double residual, const QuantileModel& model) {
  DepthRecord r;
  r.id = id;
  r.latent = latent;
  r.residual = residual;
  r.rank = Rank(latent, model, RankMode::kEntropic);
  r.inner = MkDepthFromRank(r.rank, model.dim());
  r.outer = OuterDepthFromResidual(residual);
  return r;
}

double InnerDepth(const ImageHistogram& image, const Pipeline& pipeline) {
  return MkDepth(EmbedImage(image, pipeline).latent, pipeline.quantiles);
}

double OuterDepth(const ImageHistogram& image, const Pipeline& pipeline) {
  return OuterDepthFromResidual(EmbedImage(image, pipeline).residual);
}

double HardInnerDepth(const Eigen::VectorXd& latent, const QuantileModel& model) {
  return MkDepthFromRank(Rank(latent, model, RankMode::kHard), model.dim());
}

DepthReport ComputeDepths(std::span<const ImageHistogram> images,
                          const Pipeline& pipeline) {
  DepthReport report;
  report.records.resize(images.size());
  ParallelFor(images.size(), [&](std::size_t i) {
    const Embedding e = EmbedImage(images[i], pipeline);
    report.records[i] = DepthOfLatent(i, e.latent, e.residual, pipeline.quantiles);
  });
  return report;
}

DepthReport TrainingDepths(const Pipeline& pipeline) {
  const std::size_t n = static_cast<std::size_t>(pipeline.latents.rows());
  DepthReport report;
  report.records.resize(n);
  ParallelFor(n, [&](std::size_t i) {
    const Eigen::Index r = static_cast<Eigen::Index>(i);
    const double residual =
        ResidualDistance(pipeline.embeddings.row(r).transpose(), pipeline.pca);
    report.records[i] = DepthOfLatent(i, pipeline.latents.row(r).transpose(),
                                      residual, pipeline.quantiles);
  });
  return report;
}

std::vector<std::size_t> OrderStatistics(std::span<const double> depths) {
  std::vector<std::size_t> order(depths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return depths[a] > depths[b];
  });
  return order;
}

std::vector<std::size_t> OrderStatistics(const DepthReport& report, DepthKey key) {
  if (report.records.empty()) throw ArgumentError("depth report is empty");
  std::vector<double> d(report.records.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = key == DepthKey::kInner ? report.records[i].inner : report.records[i].outer;
  }
  std::vector<std::size_t> order = OrderStatistics(d);
  for (auto& o : order) o = report.records[o].id;
  return order;
}

std::array<std::size_t, 5> FiveSummaryPositions(std::size_t n) {
  if (n < 5) throw ArgumentError("five-image summary needs n >= 5");
  // ceil(q n) in integer arithmetic, q in quarters.
  auto quarter = [n](std::size_t q) { return (q * n + 3) / 4; };
  return {1, quarter(1), quarter(2), quarter(3), n};
}

std::array<std::size_t, 5> FiveSummary(const DepthReport& report, DepthKey key) {
  const std::vector<std::size_t> order = OrderStatistics(report, key);
  const auto pos = FiveSummaryPositions(order.size());
  std::array<std::size_t, 5> ids;
  for (int k = 0; k < 5; ++k) ids[k] = order[pos[k] - 1];
  return ids;
}

std::string DepthReportCsv(const DepthReport& report) {
  std::string out = "id,inner,outer,rank_norm,residual\n";
  for (const auto& r : report.records) {
    out += std::to_string(r.id) + "," + FormatDouble(r.inner) + "," +
           FormatDouble(r.outer) + "," + FormatDouble(r.rank_norm()) + "," +
           FormatDouble(r.residual) + "\n";
  }
  return out;
}

std::string DepthReportJson(const DepthReport& report) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["inner"] = r.inner;
    j["outer"] = r.outer;
    j["rank_norm"] = r.rank_norm();
    j["residual"] = r.residual;
    j["rank"] = std::vector<double>(r.rank.data(), r.rank.data() + r.rank.size());
    j["latent"] = std::vector<double>(r.latent.data(), r.latent.data() + r.latent.size());
    records.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["records"] = std::move(records);
  return doc.dump(1) + "\n";
}

}  // namespace lotdepth
