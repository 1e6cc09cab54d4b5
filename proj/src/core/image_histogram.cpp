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

#include "core/image_histogram.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include "core/errors.hpp"
#include "core/io_util.hpp"
#include "core/rng.hpp"

namespace lotdepth {

namespace {

constexpr std::uint32_t kIdxImageMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

long double CompensatedSum(std::span<const double> v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return s;
}

// Reads a whole file through zlib, which passes uncompressed input through.
std::string ReadMaybeGzip(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (f == nullptr) throw IoError("cannot open '" + path + "'");
  std::string out;
  std::array<char, 1 << 16> buf;
  for (;;) {
    const int got = gzread(f, buf.data(), static_cast<unsigned>(buf.size()));
    if (got < 0) {
      int errnum = 0;
      const std::string msg = gzerror(f, &errnum);
      gzclose(f);
      throw IoError("read failed on '" + path + "': " + msg);
    }
    if (got == 0) break;
    out.append(buf.data(), static_cast<std::size_t>(got));
  }
  gzclose(f);
  return out;
}

std::uint32_t ReadBigEndian32(const std::string& bytes, std::size_t offset) {
  if (offset + 4 > bytes.size()) {
    throw LengthError("IDX header truncated at byte " + std::to_string(offset));
  }
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) |
         (std::uint32_t{p[2]} << 8) | std::uint32_t{p[3]};
}

std::string HexMagic(std::uint32_t m) {
  std::ostringstream ss;
  ss << "0x" << std::hex << m;
  return ss.str();
}

// PGM tokenizer: whitespace separated, '#' starts a comment to end of line.
class PgmTokens {
 public:
  explicit PgmTokens(const std::string& bytes) : bytes_(bytes) {}

  std::string Next() {
    SkipSpaceAndComments();
    std::string tok;
    while (pos_ < bytes_.size() &&
           !std::isspace(static_cast<unsigned char>(bytes_[pos_])) &&
           bytes_[pos_] != '#') {
      tok.push_back(bytes_[pos_++]);
    }
    if (tok.empty()) throw FormatError("PGM: unexpected end of header");
    return tok;
  }

  long NextInt() {
    const std::string tok = Next();
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') {
      throw FormatError("PGM: expected integer, got '" + tok + "'");
    }
    return v;
  }

  // Binary rasters start after exactly one whitespace byte.
  std::size_t RasterStart() {
    if (pos_ >= bytes_.size()) throw LengthError("PGM: missing raster");
    return pos_ + 1;
  }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        return;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

ImageHistogram GaussianBump(const PixelGrid& grid, Point2 center, double sx,
                            double sy, double rho, std::uint64_t seed,
                            double jitter) {
  if (!(sx > 0.0) || !(sy > 0.0)) {
    throw ArgumentError("blob scale must be positive");
  }
  if (!(rho > -1.0 && rho < 1.0)) {
    throw ArgumentError("blob correlation must lie in (-1, 1)");
  }
  if (!(jitter >= 0.0 && jitter < 1.0)) {
    throw ArgumentError("blob jitter must lie in [0, 1)");
  }
  const double det = sx * sx * sy * sy * (1.0 - rho * rho);
  const double ixx = sy * sy / det;
  const double iyy = sx * sx / det;
  const double ixy = -rho * sx * sy / det;
  Rng rng(seed);
  std::vector<double> intensity(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Point2 w = grid.Coord(k);
    const double dx = w.x - center.x;
    const double dy = w.y - center.y;
    const double q = ixx * dx * dx + 2.0 * ixy * dx * dy + iyy * dy * dy;
    double v = std::exp(-0.5 * q);
    // Draw for every pixel so the jitter pattern does not depend on the floor.
    const double u = rng.Uniform();
    if (v < kBlobFloor) {
      v = 0.0;
    } else {
      v *= 1.0 + jitter * (2.0 * u - 1.0);
    }
    intensity[k] = v;
  }
  try {
    return ImageHistogram::FromIntensities(grid, intensity);
  } catch (const DegenerateImageError&) {
    throw DegenerateImageError(
        "blob mass underflows: center too far outside the grid");
  }
}

}  // namespace

PixelGrid::PixelGrid(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) {
    throw ArgumentError("pixel grid needs width, height >= 1 (got " +
                        std::to_string(width) + "x" + std::to_string(height) +
                        ")");
  }
}

ImageHistogram::ImageHistogram(PixelGrid grid, std::vector<double> weights)
    : grid_(grid), weights_(std::move(weights)) {
  if (weights_.size() != grid_.size()) {
    throw ArgumentError("weight vector length " +
                        std::to_string(weights_.size()) +
                        " does not match grid size " +
                        std::to_string(grid_.size()));
  }
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw DomainError("histogram weights must be finite and nonnegative");
    }
  }
  const long double mass = CompensatedSum(weights_);
  if (std::fabs(static_cast<double>(mass - 1.0L)) > kMassTolerance) {
    throw ArgumentError("histogram mass must be 1 (got " +
                        FormatDouble(static_cast<double>(mass)) + ")");
  }
}

ImageHistogram ImageHistogram::FromIntensities(
    PixelGrid grid, std::span<const double> intensities,
    const NormalizeOptions& options) {
  if (intensities.size() != grid.size()) {
    throw ArgumentError("intensity vector length does not match grid size");
  }
  std::vector<double> w(intensities.begin(), intensities.end());
  for (double& v : w) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError("pixel intensities must be finite and nonnegative");
    }
    if (options.smooth) v += options.delta;
  }
  const long double total = CompensatedSum(w);
  if (!(total > 0.0L)) {
    throw DegenerateImageError("image has zero total intensity");
  }
  for (double& v : w) v = static_cast<double>(v / total);
  return ImageHistogram(grid, std::move(w));
}

std::vector<std::size_t> ImageHistogram::Support() const {
  std::vector<std::size_t> s;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    if (weights_[k] > 0.0) s.push_back(k);
  }
  return s;
}

std::vector<ImageHistogram> LoadIdxImages(const std::string& path,
                                          const NormalizeOptions& options) {
  const std::string bytes = ReadMaybeGzip(path);
  const std::uint32_t magic = ReadBigEndian32(bytes, 0);
  if (magic != kIdxImageMagic) {
    throw FormatError("IDX image file '" + path + "' has magic " +
                      HexMagic(magic) + ", expected 0x803");
  }
  const std::uint32_t count = ReadBigEndian32(bytes, 4);
  const std::uint32_t rows = ReadBigEndian32(bytes, 8);
  const std::uint32_t cols = ReadBigEndian32(bytes, 12);
  if (rows == 0 || cols == 0 || rows > (1u << 15) || cols > (1u << 15)) {
    throw FormatError("IDX image dimensions out of range");
  }
  const PixelGrid grid(static_cast<int>(cols), static_cast<int>(rows));
  const std::size_t p = grid.size();
  const std::size_t need = 16 + static_cast<std::size_t>(count) * p;
  if (bytes.size() < need) {
    throw LengthError("IDX image payload truncated: need " +
                      std::to_string(need) + " bytes, have " +
                      std::to_string(bytes.size()));
  }
  std::vector<ImageHistogram> out;
  out.reserve(count);
  std::vector<double> intensity(p);
  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + 16);
  for (std::uint32_t i = 0; i < count; ++i) {
    for (std::size_t k = 0; k < p; ++k) intensity[k] = raster[i * p + k];
    try {
      out.push_back(ImageHistogram::FromIntensities(grid, intensity, options));
    } catch (const DegenerateImageError&) {
      throw DegenerateImageError("IDX image " + std::to_string(i) +
                                 " is all zero");
    }
  }
  return out;
}

std::vector<int> LoadIdxLabels(const std::string& path) {
  const std::string bytes = ReadMaybeGzip(path);
  const std::uint32_t magic = ReadBigEndian32(bytes, 0);
  if (magic != kIdxLabelMagic) {
    throw FormatError("IDX label file '" + path + "' has magic " +
                      HexMagic(magic) + ", expected 0x801");
  }
  const std::uint32_t count = ReadBigEndian32(bytes, 4);
  if (bytes.size() < 8 + static_cast<std::size_t>(count)) {
    throw LengthError("IDX label payload truncated");
  }
  std::vector<int> labels(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    labels[i] = static_cast<unsigned char>(bytes[8 + i]);
  }
  return labels;
}

GridFormat GridFormatFromPath(const std::string& path) {
  auto ends_with = [&](const char* ext) {
    const std::size_t n = std::strlen(ext);
    if (path.size() < n) return false;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::tolower(static_cast<unsigned char>(path[path.size() - n + i])) !=
          ext[i]) {
        return false;
      }
    }
    return true;
  };
  if (ends_with(".pgm")) return GridFormat::kPgm;
  if (ends_with(".csv")) return GridFormat::kCsv;
  throw ArgumentError("cannot infer grid format of '" + path +
                      "' (expected .pgm or .csv)");
}

ImageHistogram ParsePgm(const std::string& bytes,
                        const NormalizeOptions& options) {
  PgmTokens tokens(bytes);
  const std::string kind = tokens.Next();
  if (kind != "P2" && kind != "P5") {
    throw FormatError("PGM: unsupported magic '" + kind + "'");
  }
  const long width = tokens.NextInt();
  const long height = tokens.NextInt();
  const long maxval = tokens.NextInt();
  if (width < 1 || height < 1 || width > (1 << 15) || height > (1 << 15)) {
    throw FormatError("PGM: bad dimensions");
  }
  if (maxval < 1 || maxval > 65535) throw FormatError("PGM: bad maxval");
  const PixelGrid grid(static_cast<int>(width), static_cast<int>(height));
  std::vector<double> intensity(grid.size());
  if (kind == "P2") {
    for (auto& v : intensity) {
      const long x = tokens.NextInt();
      if (x < 0 || x > maxval) throw FormatError("PGM: sample out of range");
      v = static_cast<double>(x);
    }
  } else {
    const std::size_t start = tokens.RasterStart();
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < start + grid.size() * bpp) {
      throw LengthError("PGM: raster truncated");
    }
    const auto* raster =
        reinterpret_cast<const unsigned char*>(bytes.data() + start);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      intensity[k] = bpp == 1 ? raster[k]
                              : static_cast<double>((raster[2 * k] << 8) |
                                                    raster[2 * k + 1]);
    }
  }
  return ImageHistogram::FromIntensities(grid, intensity, options);
}

ImageHistogram ParseCsvGrid(const std::string& text,
                            const NormalizeOptions& options) {
  std::vector<double> values;
  std::size_t width = 0;
  std::size_t height = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t row_len = 0;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
      if (end == cell.c_str() || (end && *end != '\0')) {
        throw FormatError("CSV: cannot parse '" + cell + "' as a number");
      }
      if (v < 0.0) throw DomainError("CSV: negative entry " + cell);
      values.push_back(v);
      ++row_len;
    }
    if (width == 0) {
      width = row_len;
    } else if (row_len != width) {
      throw FormatError("CSV: ragged rows");
    }
    ++height;
  }
  if (height == 0 || width == 0) throw FormatError("CSV: empty grid");
  return ImageHistogram::FromIntensities(
      PixelGrid(static_cast<int>(width), static_cast<int>(height)), values,
      options);
}

ImageHistogram LoadGrid(const std::string& path, GridFormat format,
                        const NormalizeOptions& options) {
  const std::string bytes = ReadFile(path);
  return format == GridFormat::kPgm ? ParsePgm(bytes, options)
                                    : ParseCsvGrid(bytes, options);
}

ImageHistogram SynthBlob(const PixelGrid& grid, Point2 center, double scale,
                         std::uint64_t seed, double jitter) {
  return GaussianBump(grid, center, scale, scale, 0.0, seed, jitter);
}

ImageHistogram SynthGaussian(const PixelGrid& grid, Point2 center, double sx,
                             double sy, double rho, std::uint64_t seed,
                             double jitter) {
  return GaussianBump(grid, center, sx, sy, rho, seed, jitter);
}

ImageHistogram SynthPointCloud(const PixelGrid& grid, std::size_t count,
                               std::uint64_t seed) {
  if (count == 0 || count > grid.size()) {
    throw ArgumentError("point cloud size must lie in [1, grid size]");
  }
  std::vector<std::size_t> idx(grid.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<double> intensity(grid.size(), 0.0);
  for (std::size_t i = 0; i < count; ++i) intensity[idx[i]] = 1.0;
  return ImageHistogram::FromIntensities(grid, intensity);
}

ImageHistogram Downscale(const ImageHistogram& image, int width, int height) {
  const PixelGrid target(width, height);
  const PixelGrid& src = image.grid();
  const double sx = static_cast<double>(src.width()) / width;
  const double sy = static_cast<double>(src.height()) / height;
  auto sample = [&](int x, int y) {
    x = std::clamp(x, 0, src.width() - 1);
    y = std::clamp(y, 0, src.height() - 1);
    return image.weight(src.Index(x, y));
  };
  std::vector<double> out(target.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      // Pixel centers aligned as in common image resamplers.
      const double fx = (x + 0.5) * sx - 0.5;
      const double fy = (y + 0.5) * sy - 0.5;
      const int x0 = static_cast<int>(std::floor(fx));
      const int y0 = static_cast<int>(std::floor(fy));
      const double ax = fx - x0;
      const double ay = fy - y0;
      out[target.Index(x, y)] =
          (1 - ax) * (1 - ay) * sample(x0, y0) + ax * (1 - ay) * sample(x0 + 1, y0) +
          (1 - ax) * ay * sample(x0, y0 + 1) + ax * ay * sample(x0 + 1, y0 + 1);
    }
  }
  return ImageHistogram::FromIntensities(target, out);
}

std::string EncodePgm(const ImageHistogram& image) {
  const double peak =
      *std::max_element(image.weights().begin(), image.weights().end());
  std::string out = "P5\n" + std::to_string(image.grid().width()) + " " +
                    std::to_string(image.grid().height()) + "\n255\n";
  out.reserve(out.size() + image.size());
  for (double w : image.weights()) {
    const double v = peak > 0.0 ? std::round(255.0 * w / peak) : 0.0;
    out.push_back(static_cast<char>(static_cast<unsigned char>(v)));
  }
  return out;
}

void WritePgm(const ImageHistogram& image, const std::string& path) {
  WriteFile(path, EncodePgm(image));
}

namespace {

void AppendBigEndian32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

void WriteMaybeGzip(const std::string& path, const std::string& bytes) {
  const bool gz = path.size() >= 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  if (!gz) {
    WriteFile(path, bytes);
    return;
  }
  gzFile f = gzopen(path.c_str(), "wb9");
  if (f == nullptr) throw IoError("cannot open '" + path + "' for writing");
  const int wrote = gzwrite(f, bytes.data(), static_cast<unsigned>(bytes.size()));
  const int closed = gzclose(f);
  if (wrote != static_cast<int>(bytes.size()) || closed != Z_OK) {
    throw IoError("write failed on '" + path + "'");
  }
}

}  // namespace

std::string EncodeIdxImages(std::span<const ImageHistogram> images) {
  if (images.empty()) throw ArgumentError("no images to write");
  const PixelGrid& grid = images[0].grid();
  std::string out;
  AppendBigEndian32(out, kIdxImageMagic);
  AppendBigEndian32(out, static_cast<std::uint32_t>(images.size()));
  AppendBigEndian32(out, static_cast<std::uint32_t>(grid.height()));
  AppendBigEndian32(out, static_cast<std::uint32_t>(grid.width()));
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!(images[i].grid() == grid)) {
      throw ArgumentError("image " + std::to_string(i) + " is on a different grid");
    }
    // Same scaling as the PGM writer; keep only its pixel bytes.
    const std::string pgm = EncodePgm(images[i]);
    out.append(pgm, pgm.size() - images[i].size(), std::string::npos);
  }
  return out;
}

void WriteIdxImages(std::span<const ImageHistogram> images, const std::string& path) {
  WriteMaybeGzip(path, EncodeIdxImages(images));
}

void WriteIdxLabels(std::span<const int> labels, const std::string& path) {
  std::string out;
  AppendBigEndian32(out, kIdxLabelMagic);
  AppendBigEndian32(out, static_cast<std::uint32_t>(labels.size()));
  for (int l : labels) {
    if (l < 0 || l > 255) throw ArgumentError("IDX labels must fit in a byte");
    out.push_back(static_cast<char>(static_cast<unsigned char>(l)));
  }
  WriteMaybeGzip(path, out);
}

std::uint64_t HashHistogram(const ImageHistogram& image) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::int32_t dims[2] = {image.grid().width(), image.grid().height()};
  mix(dims, sizeof(dims));
  mix(image.weights().data(), image.weights().size() * sizeof(double));
  return h;
}

}  // namespace lotdepth
