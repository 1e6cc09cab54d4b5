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

#include "core/lot_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace lotdepth {

namespace {

void CheckCommonGrid(std::span<const ImageHistogram> images) {
  if (images.empty()) throw ArgumentError("image list is empty");
  for (std::size_t k = 1; k < images.size(); ++k) {
    if (!(images[k].grid() == images[0].grid())) {
      throw ArgumentError("image " + std::to_string(k) +
                          " is on a different grid than image 0");
    }
  }
}

std::vector<double> PixelwiseMean(std::span<const ImageHistogram> images) {
  std::vector<long double> acc(images[0].size(), 0.0L);
  for (const auto& im : images) {
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += im.weight(k);
  }
  std::vector<double> mean(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) {
    mean[k] = static_cast<double>(acc[k] / static_cast<long double>(images.size()));
  }
  return mean;
}

void CheckSameGrid(const PixelGrid& a, const PixelGrid& b, const char* what) {
  if (!(a == b)) {
    throw ArgumentError(std::string(what) + ": grid does not match the template");
  }
}

}  // namespace

Eigen::VectorXd Flatten(const TangentVector& v) {
  Eigen::VectorXd out(2 * static_cast<Eigen::Index>(v.displacements.size()));
  for (std::size_t k = 0; k < v.displacements.size(); ++k) {
    out[2 * k] = v.displacements[k].x;
    out[2 * k + 1] = v.displacements[k].y;
  }
  return out;
}

TangentVector Unflatten(const PixelGrid& grid, const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != 2 * grid.size()) {
    throw ArgumentError("flattened tangent vector has length " +
                        std::to_string(flat.size()) + ", expected " +
                        std::to_string(2 * grid.size()));
  }
  TangentVector v{grid, std::vector<Point2>(grid.size())};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    v.displacements[k] = {flat[2 * k], flat[2 * k + 1]};
  }
  return v;
}

std::vector<double> DistancesToMean(std::span<const ImageHistogram> images) {
  CheckCommonGrid(images);
  const std::vector<double> mean = PixelwiseMean(images);
  std::vector<double> out(images.size());
  for (std::size_t j = 0; j < images.size(); ++j) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < mean.size(); ++k) {
      const long double d = images[j].weight(k) - mean[k];
      s += d * d;
    }
    out[j] = std::sqrt(static_cast<double>(s));
  }
  return out;
}

TemplateModel SelectTemplate(std::span<const ImageHistogram> images,
                             TemplateOrigin origin,
                             std::size_t explicit_index) {
  CheckCommonGrid(images);
  switch (origin) {
    case TemplateOrigin::kPixelwiseMean: {
      std::vector<double> mean = PixelwiseMean(images);
      return {ImageHistogram::FromIntensities(images[0].grid(), mean), origin,
              std::nullopt};
    }
    case TemplateOrigin::kExplicitIndex:
      if (explicit_index >= images.size()) {
        throw ArgumentError("template index " + std::to_string(explicit_index) +
                            " out of range");
      }
      return {images[explicit_index], origin, explicit_index};
    case TemplateOrigin::kArgminToMean:
      break;
  }
  const std::vector<double> dist = DistancesToMean(images);
  // First minimum wins.
  const std::size_t best = static_cast<std::size_t>(
      std::min_element(dist.begin(), dist.end()) - dist.begin());
  return {images[best], origin, best};
}

TangentVector LogMapWithPlan(const ImageHistogram& image,
                             const TemplateModel& model, TransportPlan* plan) {
  CheckSameGrid(image.grid(), model.image.grid(), "LogMap");
  TransportPlan p = SolveExact(model.image, image);
  const MongeMapGrid t = BarycentricMap(p);
  const PixelGrid& grid = model.image.grid();
  TangentVector v{grid, std::vector<Point2>(grid.size())};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (model.image.weight(k) > 0.0) {
      const Point2 w = grid.Coord(k);
      v.displacements[k] = {t.images[k].x - w.x, t.images[k].y - w.y};
    }
  }
  if (plan != nullptr) *plan = std::move(p);
  return v;
}

TangentVector LogMap(const ImageHistogram& image, const TemplateModel& model) {
  return LogMapWithPlan(image, model, nullptr);
}

std::vector<TangentVector> LogMapAll(std::span<const ImageHistogram> images,
                                     const TemplateModel& model) {
  std::vector<TangentVector> out(images.size());
  ParallelFor(images.size(),
              [&](std::size_t i) { out[i] = LogMap(images[i], model); });
  return out;
}

ImageHistogram ExpMap(const TangentVector& v, const TemplateModel& model) {
  const PixelGrid& grid = model.image.grid();
  CheckSameGrid(v.grid, grid, "ExpMap");
  if (v.displacements.size() != grid.size()) {
    throw ArgumentError("ExpMap: displacement field has the wrong length");
  }
  const double max_x = grid.width() - 1;
  const double max_y = grid.height() - 1;
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double m = model.image.weight(k);
    if (m == 0.0) continue;
    const Point2 w = grid.Coord(k);
    const Point2 d = v.displacements[k];
    if (!std::isfinite(d.x) || !std::isfinite(d.y)) {
      throw DomainError("ExpMap: non-finite displacement at pixel " +
                        std::to_string(k));
    }
    const double x = std::clamp(w.x + d.x, 0.0, max_x);
    const double y = std::clamp(w.y + d.y, 0.0, max_y);
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = std::min(x0 + 1, grid.width() - 1);
    const int y1 = std::min(y0 + 1, grid.height() - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    out[grid.Index(x0, y0)] += m * (1.0 - fx) * (1.0 - fy);
    out[grid.Index(x1, y0)] += m * fx * (1.0 - fy);
    out[grid.Index(x0, y1)] += m * (1.0 - fx) * fy;
    out[grid.Index(x1, y1)] += m * fx * fy;
  }
  return ImageHistogram::FromIntensities(grid, out);
}

double TangentMetric(const TangentVector& v, const TangentVector& w,
                     const TemplateModel& model) {
  const PixelGrid& grid = model.image.grid();
  CheckSameGrid(v.grid, grid, "TangentMetric");
  CheckSameGrid(w.grid, grid, "TangentMetric");
  long double s = 0.0L;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double m = model.image.weight(k);
    if (m == 0.0) continue;
    const Point2 a = v.displacements[k];
    const Point2 b = w.displacements[k];
    s += static_cast<long double>(m) * (a.x * b.x + a.y * b.y);
  }
  return static_cast<double>(s);
}

UpperBoundCheck W2UpperBoundCheck(const ImageHistogram& i,
                                  const ImageHistogram& j,
                                  const TemplateModel& model) {
  TransportPlan pi, pj;
  const TangentVector vi = LogMapWithPlan(i, model, &pi);
  const TangentVector vj = LogMapWithPlan(j, model, &pj);
  TangentVector diff = vi;
  for (std::size_t k = 0; k < diff.displacements.size(); ++k) {
    diff.displacements[k].x -= vj.displacements[k].x;
    diff.displacements[k].y -= vj.displacements[k].y;
  }
  UpperBoundCheck out;
  out.lhs = SolveExact(i, j).cost;
  out.rhs = TangentMetric(diff, diff, model);
  out.i_plan_is_map = IsMapPlan(pi);
  out.j_plan_is_map = IsMapPlan(pj);
  return out;
}

}  // namespace lotdepth
