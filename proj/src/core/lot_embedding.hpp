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

// Linear optimal transport embedding: template selection and the
// logarithm / exponential maps at the template.

#ifndef LOTDEPTH_CORE_LOT_EMBEDDING_HPP_
#define LOTDEPTH_CORE_LOT_EMBEDDING_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "core/discrete_ot.hpp"
#include "core/image_histogram.hpp"

namespace lotdepth {

enum class TemplateOrigin {
  kArgminToMean,   // dataset image closest to the pixelwise mean
  kPixelwiseMean,  // the pixelwise mean itself
  kExplicitIndex,  // caller-chosen dataset image
};

struct TemplateModel {
  ImageHistogram image;
  TemplateOrigin origin = TemplateOrigin::kArgminToMean;
  std::optional<std::size_t> source_index;
};

// Per-pixel displacement v(omega_i) = T(omega_i) - omega_i on the template
// grid.
struct TangentVector {
  PixelGrid grid;
  std::vector<Point2> displacements;
};

// Version tag of the flattening layout below; stored in containers.
inline constexpr int kFlatteningVersion = 1;

// Pixel-major, x then y: [v0.x, v0.y, v1.x, v1.y, ...].
Eigen::VectorXd Flatten(const TangentVector& v);
TangentVector Unflatten(const PixelGrid& grid, const Eigen::VectorXd& flat);

// `explicit_index` is only read for kExplicitIndex. Ties in the argmin go
// to the lowest index. Throws ArgumentError on an empty list, mixed grids,
// or an out-of-range explicit index.
TemplateModel SelectTemplate(std::span<const ImageHistogram> images,
                             TemplateOrigin origin,
                             std::size_t explicit_index = 0);

// Pixelwise 2-norm distance of every image to the pixelwise mean.
std::vector<double> DistancesToMean(std::span<const ImageHistogram> images);

// Log map through the barycentric projection of the exact plan from the
// template to `image`. Pixels without template mass get v = 0.
TangentVector LogMap(const ImageHistogram& image, const TemplateModel& model);

// Same as LogMap but also returns the plan used.
TangentVector LogMapWithPlan(const ImageHistogram& image,
                             const TemplateModel& model, TransportPlan* plan);

// LogMap over a dataset, in parallel over images. Output order follows the
// input.
std::vector<TangentVector> LogMapAll(std::span<const ImageHistogram> images,
                                     const TemplateModel& model);

// Pushes the template mass forward along v. Each I_r(omega_i) lands at
// omega_i + v(omega_i), clamped to the grid, and is split bilinearly over
// the surrounding pixels.
ImageHistogram ExpMap(const TangentVector& v, const TemplateModel& model);

// sum_i <v(omega_i), w(omega_i)> I_r(omega_i).
double TangentMetric(const TangentVector& v, const TangentVector& w,
                     const TemplateModel& model);

struct UpperBoundCheck {
  double lhs = 0.0;  // W2^2(I, J)
  double rhs = 0.0;  // |Log(I) - Log(J)|^2 in the template metric
  bool i_plan_is_map = false;
  bool j_plan_is_map = false;
  bool both_maps() const { return i_plan_is_map && j_plan_is_map; }
};

// lhs <= rhs is guaranteed (up to rounding) when both template plans are
// maps, since (T_I, T_J) pushes I_r to a coupling of I and J.
UpperBoundCheck W2UpperBoundCheck(const ImageHistogram& i,
                                  const ImageHistogram& j,
                                  const TemplateModel& model);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_LOT_EMBEDDING_HPP_
