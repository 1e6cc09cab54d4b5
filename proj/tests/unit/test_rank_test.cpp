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


#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/rank_test.hpp"
#include "core/rng.hpp"
#include "core/special.hpp"
#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

using namespace lotdepth;

namespace {

LatentSampler GaussianSampler(double shift) {
  return [shift](std::size_t count, std::uint64_t seed) {
    Eigen::MatrixXd x = testutil::GaussianMatrix(static_cast<Eigen::Index>(count), 2, seed);
    x.col(0).array() += shift;
    return x;
  };
}

ImageSampler BlobSampler(double cx) {
  return [cx](std::size_t count, std::uint64_t seed) {
    const PixelGrid grid(26, 6);
    Rng rng(seed);
    std::vector<ImageHistogram> out;
    for (std::size_t i = 0; i < count; ++i) {
      const Point2 c{cx + 0.5 * rng.Normal(), 2.5 + 0.3 * rng.Normal()};
      out.push_back(SynthBlob(grid, c, 1.0, DeriveSeed(seed, i)));
    }
    return out;
  };
}

}  // namespace

TEST_CASE("Identical samples give a zero statistic") {
  const Eigen::MatrixXd a = testutil::GaussianMatrix(40, 3, 1);
  const auto r = TwoSampleTestLatent(a, a, 0.05, 2);
  CHECK(r.statistic == 0.0);
  CHECK_FALSE(r.reject);
  CHECK(r.dof == 3);
  CHECK(r.m == 40);
  CHECK(r.n == 40);

  const auto images = BlobSampler(12.0)(12, 3);
  const auto ri = TwoSampleTest(images, images, 2, 0.05, 4);
  CHECK(ri.statistic == 0.0);
  CHECK_FALSE(ri.reject);
}

TEST_CASE("Statistic is symmetric in the two samples") {
  const Eigen::MatrixXd a = testutil::GaussianMatrix(30, 2, 5);
  const Eigen::MatrixXd b = testutil::GaussianMatrix(45, 2, 6);
  const auto ab = TwoSampleTestLatent(a, b, 0.05, 7);
  const auto ba = TwoSampleTestLatent(b, a, 0.05, 7);
  CHECK(ab.statistic == doctest::Approx(ba.statistic).epsilon(1e-12));
  CHECK(ab.statistic > 0.0);
}

TEST_CASE("Argument checks") {
  const Eigen::MatrixXd a = testutil::GaussianMatrix(10, 2, 8);
  CHECK_THROWS_AS(TwoSampleTestLatent(a.topRows(1), a, 0.05, 1), ArgumentError);
  CHECK_THROWS_AS(TwoSampleTestLatent(a, testutil::GaussianMatrix(10, 3, 9), 0.05, 1),
                  ArgumentError);
  CHECK_THROWS_AS(TwoSampleTestLatent(a, a, 0.0, 1), ArgumentError);
  CHECK_THROWS_AS(TwoSampleTestLatent(a, a, 1.0, 1), ArgumentError);
  Eigen::MatrixXd bad = a;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(TwoSampleTestLatent(bad, a, 0.05, 1), DomainError);
  CHECK_THROWS_AS(RejectionRateLatent(GaussianSampler(0), GaussianSampler(0), 5, 5, 0.05, 0, 1),
                  ArgumentError);
}

TEST_CASE("Chi-square quantiles") {
  CHECK(Chi2Quantile(2, 0.95) == doctest::Approx(-2.0 * std::log(0.05)).epsilon(1e-12));
  CHECK(Chi2Quantile(1, 0.95) == doctest::Approx(3.841458820694124).epsilon(1e-12));
  double previous = 0.0;
  for (int d = 1; d <= 20; ++d) {
    const double q = Chi2Quantile(d, 0.95);
    CHECK(q > previous);
    previous = q;
  }
  for (double p : {0.1, 0.5, 0.9, 0.99}) CHECK(Chi2Quantile(3, p) > Chi2Quantile(3, p - 0.05));

  // Monte-Carlo against sums of squared normals.
  const int draws = 10000000;
  Rng rng(11);
  std::vector<double> s(draws);
  for (double& v : s) {
    v = 0.0;
    for (int j = 0; j < 5; ++j) {
      const double z = rng.Normal();
      v += z * z;
    }
  }
  const double q = Chi2Quantile(5, 0.95);
  const double below = static_cast<double>(std::count_if(s.begin(), s.end(),
                                                         [q](double v) { return v <= q; })) /
                       draws;
  CHECK(std::fabs(below - 0.95) < 1e-3);
  std::nth_element(s.begin(), s.begin() + static_cast<long>(0.95 * draws), s.end());
  CHECK(std::fabs(s[static_cast<std::size_t>(0.95 * draws)] - q) < 2e-2);
  CHECK_THROWS_AS(Chi2Quantile(0, 0.5), ArgumentError);
  CHECK_THROWS_AS(Chi2Quantile(2, 1.0), ArgumentError);
}

TEST_CASE("Latent rejection rates") {
  SUBCASE("level under the null") {
    const double rate =
        RejectionRateLatent(GaussianSampler(0), GaussianSampler(0), 100, 100, 0.05, 50, 12);
    CHECK(rate >= 0.0);
    CHECK(rate <= 0.16);
  }
  SUBCASE("power under a location shift of 2") {
    std::vector<TestResult> results;
    const double rate = RejectionRateLatent(GaussianSampler(0), GaussianSampler(2), 50, 50,
                                            0.05, 20, 13, &results);
    CHECK(rate >= 0.98);
    CHECK(results.size() == 20);
  }
  SUBCASE("one repetition is all or nothing") {
    const double rate =
        RejectionRateLatent(GaussianSampler(0), GaussianSampler(0.5), 30, 30, 0.05, 1, 14);
    CHECK((rate == 0.0 || rate == 1.0));
  }
  SUBCASE("seeded runs repeat") {
    std::vector<TestResult> x, y;
    RejectionRateLatent(GaussianSampler(0), GaussianSampler(0.3), 40, 40, 0.05, 6, 15, &x);
    RejectionRateLatent(GaussianSampler(0), GaussianSampler(0.3), 40, 40, 0.05, 6, 15, &y);
    for (std::size_t r = 0; r < 6; ++r) CHECK(x[r].statistic == y[r].statistic);
  }
}

TEST_CASE("Disjoint blob corpora are always told apart") {
  const double rate =
      RejectionRateImages(BlobSampler(2.5), BlobSampler(22.5), 50, 50, 2, 0.05, 20, 16);
  CHECK(rate == 1.0);
}

TEST_CASE("Output formats") {
  CHECK(RejectionRateCsvHeader() == "pair,m,n,d,alpha,rate\n");
  CHECK(RejectionRateCsvRow("A-B", 50, 60, 2, 0.05, 0.25) == "A-B,50,60,2,0.05,0.25\n");
  TestResult r;
  r.statistic = 1.5;
  r.dof = 2;
  r.critical_value = Chi2Quantile(2, 0.95);
  r.m = 3;
  r.n = 4;
  const auto j = nlohmann::json::parse(TestResultJson(r));
  CHECK(j["statistic"] == 1.5);
  CHECK(j["dof"] == 2);
  CHECK(j["reject"] == false);
  CHECK(j["m"] == 3);
  CHECK(j["n"] == 4);
  CHECK(RepetitionSeed(1, 0) != RepetitionSeed(1, 1));
}
