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


#include "core/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace lotdepth {

LabeledImages SynthBlobDataset(std::size_t count, const BlobDatasetOptions& options,
                               std::uint64_t seed) {
  if (!(options.outlier_fraction >= 0.0 && options.outlier_fraction <= 1.0)) {
    throw ArgumentError("outlier fraction must be in [0, 1]");
  }
  const PixelGrid grid(options.width, options.height);
  const auto outliers = static_cast<std::size_t>(
      std::llround(options.outlier_fraction * static_cast<double>(count)));

  // Outlier positions: a seeded shuffle, first `outliers` slots.
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle(DeriveSeed(seed, seed_stream::kSubsample));
  for (std::size_t i = count; i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle.Below(i))]);
  }
  LabeledImages out;
  out.labels.assign(count, 0);
  std::vector<std::size_t> kind(count, 0);  // 0 inlier, 1 shifted, 2 elongated
  for (std::size_t k = 0; k < outliers; ++k) {
    out.labels[order[k]] = 1;
    kind[order[k]] = 1 + k % 2;
  }

  const double cx = 0.5 * (options.width - 1);
  const double cy = 0.5 * (options.height - 1);
  out.images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = DeriveSeed(seed, i);
    Rng rng(s);
    Point2 c{cx + options.center_sd * rng.Normal(), cy + options.center_sd * rng.Normal()};
    const double scale = options.scale * std::exp(options.scale_sd * rng.Normal());
    const std::uint64_t jitter_seed = DeriveSeed(s, seed_stream::kSynthetic);
    switch (kind[i]) {
      case 0:
        out.images.push_back(SynthBlob(grid, c, scale, jitter_seed));
        break;
      case 1: {
        const double theta = 2.0 * std::numbers::pi * rng.Uniform();
        c.x = std::clamp(c.x + options.shift * std::cos(theta), 0.0, options.width - 1.0);
        c.y = std::clamp(c.y + options.shift * std::sin(theta), 0.0, options.height - 1.0);
        out.images.push_back(SynthBlob(grid, c, scale, jitter_seed));
        break;
      }
      default: {
        const double rho = rng.Uniform(-0.6, 0.6);
        out.images.push_back(SynthGaussian(grid, c, scale * options.elongation,
                                           scale / options.elongation, rho,
                                           jitter_seed));
        break;
      }
    }
  }
  return out;
}

}  // namespace lotdepth
