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
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "core/discrete_ot.hpp"
#include "core/errors.hpp"
#include "core/image_histogram.hpp"
#include "core/io_util.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace lotdepth;

namespace {

void Put32(std::string& s, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) s.push_back(static_cast<char>((v >> shift) & 0xff));
}

std::string IdxHeader(std::uint32_t magic, std::uint32_t count, std::uint32_t rows,
                      std::uint32_t cols) {
  std::string s;
  Put32(s, magic);
  Put32(s, count);
  Put32(s, rows);
  Put32(s, cols);
  return s;
}

std::string WriteTemp(const std::string& name, const std::string& bytes) {
  const auto path = testutil::TempDir("hist") / name;
  WriteFile(path.string(), bytes);
  return path.string();
}

void CheckInvariants(const ImageHistogram& h) {
  double total = 0.0;
  for (double w : h.weights()) {
    CHECK(w >= 0.0);
    total += w;
  }
  CHECK(std::fabs(total - 1.0) <= 1e-12);
}

}  // namespace

TEST_CASE("IDX header with three 28x28 images") {
  std::string bytes = IdxHeader(0x00000803, 3, 28, 28);
  for (int k = 0; k < 3; ++k) {
    std::string img(28 * 28, '\0');
    img[static_cast<std::size_t>(k * 30 + 5)] = static_cast<char>(100 + k);
    bytes += img;
  }
  const auto images = LoadIdxImages(WriteTemp("three.idx", bytes));
  REQUIRE(images.size() == 3);
  for (const auto& h : images) {
    CHECK(h.grid() == PixelGrid(28, 28));
    CheckInvariants(h);
  }
}

TEST_CASE("IDX point mass and two-pixel normalization") {
  std::string bytes = IdxHeader(0x00000803, 2, 2, 2);
  bytes += std::string("\0\xc8\0\0", 4);  // single 200
  bytes += std::string("\x01\0\0\x03", 4);
  const auto images = LoadIdxImages(WriteTemp("small.idx", bytes));
  REQUIRE(images.size() == 2);
  CHECK(images[0].weight(1) == 1.0);
  CHECK(images[0].weight(0) == 0.0);
  CHECK(images[1].weight(0) == 0.25);
  CHECK(images[1].weight(3) == 0.75);
}

TEST_CASE("IDX errors") {
  std::string bad = IdxHeader(0x00000804, 1, 2, 2) + std::string(4, '\1');
  CHECK_THROWS_AS(LoadIdxImages(WriteTemp("bad.idx", bad)), FormatError);
  std::string truncated = IdxHeader(0x00000803, 2, 2, 2) + std::string(5, '\1');
  CHECK_THROWS_AS(LoadIdxImages(WriteTemp("trunc.idx", truncated)), LengthError);
  std::string zero = IdxHeader(0x00000803, 1, 2, 2) + std::string(4, '\0');
  CHECK_THROWS_AS(LoadIdxImages(WriteTemp("zero.idx", zero)), DegenerateImageError);
  CHECK_THROWS_AS(LoadIdxImages("/nonexistent/file.idx"), IoError);
}

TEST_CASE("IDX labels and gzip round trip") {
  std::string labels;
  Put32(labels, 0x00000801);
  Put32(labels, 4);
  labels += std::string("\x02\x03\x02\x09", 4);
  const auto l = LoadIdxLabels(WriteTemp("labels.idx", labels));
  CHECK(l == std::vector<int>{2, 3, 2, 9});

  const auto dir = testutil::TempDir("hist_gz");
  std::vector<ImageHistogram> imgs;
  for (int k = 0; k < 4; ++k) {
    imgs.push_back(SynthBlob(PixelGrid(9, 7), {3.0 + k * 0.5, 3.0}, 1.2, 10 + k));
  }
  WriteIdxImages(imgs, (dir / "imgs.idx.gz").string());
  WriteIdxLabels(l, (dir / "labels.idx.gz").string());
  const auto back = LoadIdxImages((dir / "imgs.idx.gz").string());
  REQUIRE(back.size() == 4);
  CHECK(back[0].grid() == PixelGrid(9, 7));
  CHECK(LoadIdxLabels((dir / "labels.idx.gz").string()) == l);
  // Reloading the same file gives the same weights bit for bit.
  CHECK(LoadIdxImages((dir / "imgs.idx.gz").string()) == back);
}

TEST_CASE("PGM and CSV grids") {
  const auto p2 = ParsePgm("P2\n2 2\n255\n1 1 1 1\n");
  CHECK(p2.grid() == PixelGrid(2, 2));
  for (double w : p2.weights()) CHECK(w == 0.25);

  const auto csv = ParseCsvGrid("0,0\n0,5\n");
  CHECK(csv.weight(3) == 1.0);  // row 1, column 1

  std::string p5 = "P5\n3 2\n255\n" + std::string(6, '\xff');
  const auto u = ParsePgm(p5);
  for (double w : u.weights()) CHECK(w == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  CHECK_THROWS_AS(ParseCsvGrid("1,-2\n3,4\n"), DomainError);
  CHECK_THROWS_AS(ParseCsvGrid("0,0\n0,0\n"), DegenerateImageError);
  CHECK_THROWS_AS(ParsePgm("P2\n2 2\n255\n0 0 0 0\n"), DegenerateImageError);
  CHECK_THROWS_AS(ParsePgm("P7\n2 2\n255\n0 0 0 0\n"), FormatError);

  const auto path = WriteTemp("grid.csv", "1,2\n3,4\n");
  CHECK(GridFormatFromPath(path) == GridFormat::kCsv);
  const auto g = LoadGrid(path, GridFormat::kCsv);
  CHECK(g.weight(0) == doctest::Approx(0.1));
  CHECK(LoadGrid(path, GridFormat::kCsv) == g);
}

TEST_CASE("PGM encoding round trip keeps the support") {
  const auto blob = SynthBlob(PixelGrid(8, 8), {3.5, 3.5}, 1.0, 3);
  const auto back = ParsePgm(EncodePgm(blob));
  CHECK(back.grid() == blob.grid());
  // The heaviest pixel survives quantization.
  std::size_t a = 0, b = 0;
  for (std::size_t k = 1; k < blob.size(); ++k) {
    if (blob.weight(k) > blob.weight(a)) a = k;
    if (back.weight(k) > back.weight(b)) b = k;
  }
  CHECK(a == b);
}

TEST_CASE("Normalization and smoothing") {
  const std::vector<double> v = {0.0, 2.0, 0.0, 6.0};
  const auto h = ImageHistogram::FromIntensities(PixelGrid(2, 2), v);
  CHECK(h.weight(1) == 0.25);
  CHECK(h.Support() == std::vector<std::size_t>{1, 3});
  NormalizeOptions smooth;
  smooth.smooth = true;
  const auto s = ImageHistogram::FromIntensities(PixelGrid(2, 2), v, smooth);
  CHECK(s.Support().size() == 4);
  CheckInvariants(s);
  CHECK_THROWS_AS(ImageHistogram(PixelGrid(2, 2), {0.5, 0.5, 0.5, 0.5}), ArgumentError);
  CHECK_THROWS_AS(ImageHistogram(PixelGrid(2, 2), {1.5, -0.5, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(PixelGrid(0, 3), ArgumentError);
}

TEST_CASE("Pixel coordinates are (column, row) in row-major order") {
  const PixelGrid g(4, 3);
  CHECK(g.size() == 12);
  CHECK(g.Coord(0) == Point2{0, 0});
  CHECK(g.Coord(5) == Point2{1, 1});
  CHECK(g.Coord(11) == Point2{3, 2});
  CHECK(g.Index(3, 2) == 11);
}

TEST_CASE("Synthetic blobs") {
  const PixelGrid grid(15, 15);
  const auto blob = SynthBlob(grid, {7.0, 7.0}, 0.8, 11);
  std::size_t arg = 0;
  for (std::size_t k = 1; k < blob.size(); ++k) {
    if (blob.weight(k) > blob.weight(arg)) arg = k;
  }
  CHECK(arg == grid.Index(7, 7));
  CheckInvariants(blob);
  CHECK(SynthBlob(grid, {7.0, 7.0}, 0.8, 11) == blob);
  CHECK_FALSE(SynthBlob(grid, {7.0, 7.0}, 0.8, 12) == blob);
  CHECK_THROWS_AS(SynthBlob(grid, {500.0, 500.0}, 0.5, 1), DegenerateImageError);
  CHECK_THROWS_AS(SynthBlob(grid, {7.0, 7.0}, 0.0, 1), ArgumentError);

  const auto g = SynthGaussian(grid, {7.0, 7.0}, 3.0, 1.0, 0.3, 5);
  CheckInvariants(g);
}

TEST_CASE("Blobs offset by (5, 0) are 5 apart in W2") {
  // Wide enough that neither blob is clipped horizontally.
  const PixelGrid grid(30, 14);
  const auto a = SynthBlob(grid, {12.0, 7.0}, 1.5, 1, 0.0);
  const auto b = SynthBlob(grid, {17.0, 7.0}, 1.5, 2, 0.0);
  CHECK(Wasserstein(a, b) == doctest::Approx(5.0).epsilon(1e-9));
  // With intensity jitter the shape changes slightly.
  const auto aj = SynthBlob(grid, {12.0, 7.0}, 1.5, 1);
  const auto bj = SynthBlob(grid, {17.0, 7.0}, 1.5, 2);
  CHECK(std::fabs(Wasserstein(aj, bj) - 5.0) < 0.05);
}

TEST_CASE("Downscale keeps a valid histogram") {
  const auto blob = SynthBlob(PixelGrid(28, 28), {14.0, 10.0}, 3.0, 4);
  const auto small = Downscale(blob, 10, 10);
  CHECK(small.grid() == PixelGrid(10, 10));
  CheckInvariants(small);
}

TEST_CASE("Histogram hash") {
  const auto a = testutil::RandomHistogram(3, 3, 1);
  const auto b = testutil::RandomHistogram(3, 3, 2);
  CHECK(HashHistogram(a) == HashHistogram(a));
  CHECK(HashHistogram(a) != HashHistogram(b));
}
