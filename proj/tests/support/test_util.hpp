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


// Small helpers shared by the unit tests.

#ifndef LOTDEPTH_TESTS_SUPPORT_TEST_UTIL_HPP_
#define LOTDEPTH_TESTS_SUPPORT_TEST_UTIL_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/image_histogram.hpp"
#include "core/pipeline.hpp"
#include "core/rng.hpp"
#include "core/synthetic.hpp"

namespace testutil {

// Random histogram with every pixel drawn from U(0, 1) (or, with
// `sparsity`, zeroed with that probability while keeping one pixel).
inline lotdepth::ImageHistogram RandomHistogram(int w, int h, std::uint64_t seed,
                                                double sparsity = 0.0) {
  lotdepth::Rng rng(seed);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (double& x : v) x = rng.Uniform() < sparsity ? 0.0 : rng.UniformOpenLow();
  v[rng.Below(v.size())] += 1.0;
  return lotdepth::ImageHistogram::FromIntensities(lotdepth::PixelGrid(w, h), v);
}

inline lotdepth::ImageHistogram PointMass(int w, int h, int x, int y) {
  std::vector<double> v(static_cast<std::size_t>(w) * h, 0.0);
  v[static_cast<std::size_t>(y) * w + x] = 1.0;
  return lotdepth::ImageHistogram(lotdepth::PixelGrid(w, h), v);
}

inline Eigen::MatrixXd GaussianMatrix(Eigen::Index rows, Eigen::Index cols,
                                      std::uint64_t seed) {
  lotdepth::Rng rng(seed);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.Normal();
  }
  return m;
}

// Fresh directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lotdepth_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Blob corpus on a small grid and a pipeline fit on it.
inline std::vector<lotdepth::ImageHistogram> Blobs(std::size_t count, int w, int h,
                                                   std::uint64_t seed,
                                                   double outlier_fraction = 0.0) {
  lotdepth::BlobDatasetOptions o;
  o.width = w;
  o.height = h;
  o.outlier_fraction = outlier_fraction;
  return lotdepth::SynthBlobDataset(count, o, seed).images;
}

inline lotdepth::Pipeline BlobPipeline(std::size_t count, int w, int h, int dim,
                                       std::uint64_t seed) {
  lotdepth::PipelineOptions o;
  o.dim = dim;
  o.seed = seed;
  return lotdepth::FitPipeline(Blobs(count, w, h, seed), o);
}

}  // namespace testutil

#endif  // LOTDEPTH_TESTS_SUPPORT_TEST_UTIL_HPP_
