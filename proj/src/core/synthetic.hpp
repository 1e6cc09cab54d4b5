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


// Seeded synthetic image corpora: jittered Gaussian blobs with optional
// planted outliers (shifted blobs and elongated blobs).

#ifndef LOTDEPTH_CORE_SYNTHETIC_HPP_
#define LOTDEPTH_CORE_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "core/image_histogram.hpp"

namespace lotdepth {

struct BlobDatasetOptions {
  int width = 16;
  int height = 16;
  double center_sd = 1.0;  // inlier center jitter around the grid center
  double scale = 2.0;      // inlier blob width
  double scale_sd = 0.1;   // log-normal jitter of the width
  double outlier_fraction = 0.0;
  double shift = 4.5;      // displacement of shifted outliers
  double elongation = 2.2; // axis ratio factor of elongated outliers
};

struct LabeledImages {
  std::vector<ImageHistogram> images;
  std::vector<int> labels;  // 1 for a planted outlier
};

// round(outlier_fraction * count) outliers at seeded positions; even-numbered
// ones are shifted, odd-numbered ones elongated. Image i draws from
// DeriveSeed(seed, i).
LabeledImages SynthBlobDataset(std::size_t count, const BlobDatasetOptions& options,
                               std::uint64_t seed);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_SYNTHETIC_HPP_
