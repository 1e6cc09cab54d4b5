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


// MNIST subset checks through the C API. Skipped when the data is absent.

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "doctest.h"
#include "lotdepth/lotdepth.h"

namespace {

const std::string kImages = LOTDEPTH_DATA_DIR "/mnist/mnist5k-images-idx3-ubyte.gz";
const std::string kLabels = LOTDEPTH_DATA_DIR "/mnist/mnist5k-labels-idx1-ubyte.gz";

struct ImagesDeleter {
  void operator()(ltd_images* p) const { ltd_images_destroy(p); }
};
using Images = std::unique_ptr<ltd_images, ImagesDeleter>;

// Images of one digit from the subset.
Images Digit(int digit) {
  ltd_images* all = nullptr;
  REQUIRE(ltd_images_load_idx(kImages.c_str(), 0, &all) == LTD_OK);
  Images owned(all);
  const size_t n = ltd_images_count(all);
  std::vector<int> labels(n);
  size_t count = 0;
  REQUIRE(ltd_labels_load_idx(kLabels.c_str(), labels.data(), n, &count) == LTD_OK);
  REQUIRE(count == n);
  ltd_images* out = nullptr;
  REQUIRE(ltd_images_create(&out) == LTD_OK);
  Images kept(out);
  for (size_t i = 0; i < n; ++i) {
    if (labels[i] == digit) REQUIRE(ltd_images_append_from(out, all, i) == LTD_OK);
  }
  return kept;
}

}  // namespace

TEST_CASE("Same-digit samples rarely reject") {
  if (!std::filesystem::exists(kImages)) {
    MESSAGE("MNIST subset not found; skipping");
    return;
  }
  const Images threes = Digit(3);
  REQUIRE(ltd_images_count(threes.get()) >= 100);
  double rate = -1.0;
  REQUIRE(ltd_rejection_rate_images(threes.get(), threes.get(), 50, 50, 2, 0.05, 50, 2026,
                                    &rate) == LTD_OK);
  MESSAGE("same-digit rejection rate " << rate);
  CHECK(rate <= 0.15);
}

TEST_CASE("Different digits are told apart") {
  if (!std::filesystem::exists(kImages)) return;
  const Images twos = Digit(2);
  const Images threes = Digit(3);
  double rate = -1.0;
  REQUIRE(ltd_rejection_rate_images(twos.get(), threes.get(), 50, 50, 2, 0.05, 10, 7,
                                    &rate) == LTD_OK);
  MESSAGE("2 vs 3 rejection rate " << rate);
  CHECK(rate >= 0.9);
}
