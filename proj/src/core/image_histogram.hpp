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

// Images as probability histograms on a rectangular pixel grid, plus the
// readers (IDX, PGM, CSV) and synthetic generators that produce them.
//
// Pixel k of a W x H grid sits at row k / W, column k % W, and has
// coordinates omega_k = (x, y) = (column, row) with unit spacing.

#ifndef LOTDEPTH_CORE_IMAGE_HISTOGRAM_HPP_
#define LOTDEPTH_CORE_IMAGE_HISTOGRAM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lotdepth {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double SquaredDistance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

class PixelGrid {
 public:
  PixelGrid() = default;
  // Throws ArgumentError unless width, height >= 1.
  PixelGrid(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  Point2 Coord(std::size_t k) const {
    return {static_cast<double>(k % static_cast<std::size_t>(width_)),
            static_cast<double>(k / static_cast<std::size_t>(width_))};
  }
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  friend bool operator==(const PixelGrid&, const PixelGrid&) = default;

 private:
  int width_ = 1;
  int height_ = 1;
};

struct NormalizeOptions {
  // Adds `delta` to every pixel before normalizing. Entropic solvers
  // converge faster on strictly positive marginals; exact OT does not care.
  bool smooth = false;
  double delta = 1e-9;
};

// Nonnegative weights summing to one on a pixel grid.
class ImageHistogram {
 public:
  static constexpr double kMassTolerance = 1e-12;

  ImageHistogram() = default;
  // Takes already-normalized weights. Throws DomainError on negative or
  // non-finite entries, ArgumentError on a size mismatch or when the mass
  // is not 1 within kMassTolerance.
  ImageHistogram(PixelGrid grid, std::vector<double> weights);

  // Normalizes raw intensities by their total. Throws DomainError on
  // negative or non-finite input, DegenerateImageError when the total is 0.
  static ImageHistogram FromIntensities(PixelGrid grid,
                                        std::span<const double> intensities,
                                        const NormalizeOptions& options = {});

  const PixelGrid& grid() const { return grid_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t k) const { return weights_[k]; }
  std::size_t size() const { return weights_.size(); }

  // Indices of strictly positive pixels, ascending.
  std::vector<std::size_t> Support() const;

  friend bool operator==(const ImageHistogram&, const ImageHistogram&) = default;

 private:
  PixelGrid grid_;
  std::vector<double> weights_{1.0};
};

// IDX image file (magic 0x00000803, unsigned-byte 3-D tensor). Plain or
// gzip-compressed. Throws FormatError on a bad magic, LengthError on a
// truncated payload, DegenerateImageError on an all-zero image.
std::vector<ImageHistogram> LoadIdxImages(const std::string& path,
                                          const NormalizeOptions& options = {});

// IDX label file (magic 0x00000801).
std::vector<int> LoadIdxLabels(const std::string& path);

enum class GridFormat { kPgm, kCsv };

// Guesses the format from the extension (.pgm or .csv).
GridFormat GridFormatFromPath(const std::string& path);

// PGM (P2 or P5) or CSV numeric grid.
ImageHistogram LoadGrid(const std::string& path, GridFormat format,
                        const NormalizeOptions& options = {});

// Parses in-memory text/bytes; LoadGrid reads the file and calls these.
ImageHistogram ParsePgm(const std::string& bytes,
                        const NormalizeOptions& options = {});
ImageHistogram ParseCsvGrid(const std::string& text,
                            const NormalizeOptions& options = {});

// Discretized Gaussian bump exp(-|omega - center|^2 / (2 scale^2)) with
// seeded multiplicative intensity jitter in [1 - jitter, 1 + jitter].
// Intensities below kBlobFloor (before jitter) are set to zero. Throws
// DegenerateImageError when nothing survives the floor.
inline constexpr double kBlobFloor = 1e-8;
inline constexpr double kDefaultBlobJitter = 0.05;

ImageHistogram SynthBlob(const PixelGrid& grid, Point2 center, double scale,
                         std::uint64_t seed,
                         double jitter = kDefaultBlobJitter);

// Anisotropic variant: covariance [[sx^2, rho sx sy], [rho sx sy, sy^2]].
ImageHistogram SynthGaussian(const PixelGrid& grid, Point2 center, double sx,
                             double sy, double rho, std::uint64_t seed,
                             double jitter = kDefaultBlobJitter);

// Uniform mass on `count` distinct pixels drawn without replacement.
ImageHistogram SynthPointCloud(const PixelGrid& grid, std::size_t count,
                               std::uint64_t seed);

// Bilinear resampling to a new grid, then renormalization.
ImageHistogram Downscale(const ImageHistogram& image, int width, int height);

// Binary PGM (P5, maxval 255) scaled so the heaviest pixel is 255.
std::string EncodePgm(const ImageHistogram& image);
void WritePgm(const ImageHistogram& image, const std::string& path);

// IDX image / label files. Each image is scaled so its heaviest pixel is
// 255. Written gzip-compressed when the path ends in ".gz". Throws
// ArgumentError on an empty list or mixed grids.
std::string EncodeIdxImages(std::span<const ImageHistogram> images);
void WriteIdxImages(std::span<const ImageHistogram> images, const std::string& path);
void WriteIdxLabels(std::span<const int> labels, const std::string& path);

// 64-bit FNV-1a over the grid dimensions and the weight bytes.
std::uint64_t HashHistogram(const ImageHistogram& image);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_IMAGE_HISTOGRAM_HPP_
