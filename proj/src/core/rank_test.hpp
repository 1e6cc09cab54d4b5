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

// Two-sample MK rank test with a chi-square calibration, and the
// Monte-Carlo rejection-rate harness.

#ifndef LOTDEPTH_CORE_RANK_TEST_HPP_
#define LOTDEPTH_CORE_RANK_TEST_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "core/image_histogram.hpp"

namespace lotdepth {

struct TestResult {
  double statistic = 0.0;  // T_{m,n}
  int dof = 0;
  double critical_value = 0.0;
  double alpha = 0.05;
  bool reject = false;
  std::size_t m = 0;
  std::size_t n = 0;
};

// Hard ranks of the pooled rows of `a` and `b` against m + n standard
// normal reference points drawn from `seed`. Rows with identical
// coordinates share the mean of their assigned reference points.
// Throws ArgumentError unless m, n >= 2, the dimensions agree and
// 0 < alpha < 1.
TestResult TwoSampleTestLatent(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b, double alpha,
                               std::uint64_t seed);

// Pools the images, picks the template closest to the pooled pixelwise
// mean, embeds to R^d with PCA on the pooled tangent vectors and runs
// TwoSampleTestLatent.
TestResult TwoSampleTest(std::span<const ImageHistogram> a,
                         std::span<const ImageHistogram> b, int d, double alpha,
                         std::uint64_t seed);

// Draws `count` latent points or images from a seed.
using LatentSampler = std::function<Eigen::MatrixXd(std::size_t count, std::uint64_t seed)>;
using ImageSampler =
    std::function<std::vector<ImageHistogram>(std::size_t count, std::uint64_t seed)>;

// Seeds of repetition r: sample A from DeriveSeed(s_r, 1), sample B from
// DeriveSeed(s_r, 2), the reference from DeriveSeed(s_r, kReference),
// where s_r = DeriveSeed(DeriveSeed(seed, kRepetition), r). Repetitions
// run in parallel. Optional `results` receives every TestResult.
double RejectionRateLatent(const LatentSampler& gen_a, const LatentSampler& gen_b,
                           std::size_t m, std::size_t n, double alpha,
                           int repetitions, std::uint64_t seed,
                           std::vector<TestResult>* results = nullptr);
double RejectionRateImages(const ImageSampler& gen_a, const ImageSampler& gen_b,
                           std::size_t m, std::size_t n, int d, double alpha,
                           int repetitions, std::uint64_t seed,
                           std::vector<TestResult>* results = nullptr);

std::uint64_t RepetitionSeed(std::uint64_t seed, int repetition);

// Columns: pair,m,n,d,alpha,rate.
std::string RejectionRateCsvHeader();
std::string RejectionRateCsvRow(const std::string& pair, std::size_t m,
                                std::size_t n, int d, double alpha, double rate);

std::string TestResultJson(const TestResult& r);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_RANK_TEST_HPP_
