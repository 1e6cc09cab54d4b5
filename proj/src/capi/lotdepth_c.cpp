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


#include "lotdepth/lotdepth.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <memory>
#include <new>
#include <numeric>
#include <string>
#include <vector>

#include "core/depths.hpp"
#include "core/discrete_ot.hpp"
#include "core/errors.hpp"
#include "core/image_histogram.hpp"
#include "core/io_util.hpp"
#include "core/model_io.hpp"
#include "core/outlier.hpp"
#include "core/pipeline.hpp"
#include "core/rank_test.hpp"
#include "core/rng.hpp"
#include "core/special.hpp"
#include "core/synthetic.hpp"

struct ltd_images {
  std::vector<lotdepth::ImageHistogram> items;
};

struct ltd_pipeline {
  lotdepth::Pipeline p;
};

struct ltd_outlier_model {
  lotdepth::OutlierModel m;
};

namespace {

using lotdepth::ArgumentError;
using lotdepth::LengthError;

thread_local std::string g_last_error;

// Runs fn and converts exceptions into status codes.
template <typename Fn>
ltd_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return LTD_OK;
  } catch (const lotdepth::Error& e) {
    g_last_error = e.what();
    return static_cast<ltd_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LTD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LTD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LTD_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) throw ArgumentError(what);
}

void RequireCapacity(std::size_t capacity, std::size_t needed) {
  if (capacity < needed) {
    throw LengthError("buffer holds " + std::to_string(capacity) +
                      " values, " + std::to_string(needed) + " needed");
  }
}

const lotdepth::ImageHistogram& At(const ltd_images* images, std::size_t index) {
  Require(images != nullptr, "images is NULL");
  if (index >= images->items.size()) {
    throw ArgumentError("image index " + std::to_string(index) + " out of range");
  }
  return images->items[index];
}

lotdepth::PipelineOptions ToOptions(const ltd_pipeline_options& o) {
  lotdepth::PipelineOptions out;
  switch (o.template_origin) {
    case LTD_TEMPLATE_ARGMIN_TO_MEAN:
      out.template_origin = lotdepth::TemplateOrigin::kArgminToMean;
      break;
    case LTD_TEMPLATE_PIXELWISE_MEAN:
      out.template_origin = lotdepth::TemplateOrigin::kPixelwiseMean;
      break;
    case LTD_TEMPLATE_EXPLICIT_INDEX:
      out.template_origin = lotdepth::TemplateOrigin::kExplicitIndex;
      break;
    default:
      throw ArgumentError("unknown template origin");
  }
  Require(o.reference_kind == LTD_REFERENCE_SPHERE ||
              o.reference_kind == LTD_REFERENCE_GAUSS,
          "unknown reference kind");
  Require(o.pca_convention == LTD_PCA_ORTHONORMAL ||
              o.pca_convention == LTD_PCA_PAPER_SCALED,
          "unknown PCA convention");
  out.template_index = o.template_index;
  out.dim = o.dim;
  out.convention = o.pca_convention == LTD_PCA_PAPER_SCALED
                       ? lotdepth::PcaConvention::kPaperScaled
                       : lotdepth::PcaConvention::kOrthonormal;
  out.weighted_pca = o.weighted_pca != 0;
  out.reference_kind = o.reference_kind == LTD_REFERENCE_GAUSS
                           ? lotdepth::ReferenceKind::kGaussian
                           : lotdepth::ReferenceKind::kSphericalUniform;
  out.reference_size = static_cast<Eigen::Index>(o.reference_size);
  out.eps_start = o.eps_start;
  out.eps_end = o.eps_end;
  out.eps_stages = o.eps_stages;
  out.seed = o.seed;
  return out;
}

lotdepth::DepthReport Depths(const ltd_pipeline* pipeline, const ltd_images* images) {
  Require(pipeline != nullptr, "pipeline is NULL");
  return images == nullptr ? lotdepth::TrainingDepths(pipeline->p)
                           : lotdepth::ComputeDepths(images->items, pipeline->p);
}

lotdepth::RankMode ToMode(int mode) {
  Require(mode == LTD_RANK_HARD || mode == LTD_RANK_ENTROPIC, "unknown rank mode");
  return mode == LTD_RANK_HARD ? lotdepth::RankMode::kHard
                               : lotdepth::RankMode::kEntropic;
}

Eigen::MatrixXd RowMajorToMatrix(const double* data, std::size_t rows, int cols) {
  Require(data != nullptr, "sample is NULL");
  Require(cols >= 1, "dimension must be >= 1");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(static_cast<Eigen::Index>(i), j) = data[i * cols + j];
  }
  return m;
}

void Fill(ltd_test_result* out, const lotdepth::TestResult& r) {
  out->statistic = r.statistic;
  out->dof = r.dof;
  out->critical_value = r.critical_value;
  out->alpha = r.alpha;
  out->reject = r.reject ? 1 : 0;
  out->m = r.m;
  out->n = r.n;
}

// `count` distinct indices below `pool`.
std::vector<std::size_t> DrawIndices(std::size_t pool, std::size_t count,
                                     std::uint64_t seed) {
  if (count > pool) {
    throw ArgumentError("cannot draw " + std::to_string(count) + " of " +
                        std::to_string(pool) + " images");
  }
  std::vector<std::size_t> idx(pool);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  lotdepth::Rng rng(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.Below(pool - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return idx;
}

}  // namespace

extern "C" {

const char* ltd_version(void) { return "0.1.0"; }

const char* ltd_last_error(void) { return g_last_error.c_str(); }

const char* ltd_status_name(ltd_status status) {
  switch (status) {
    case LTD_OK: return "ok";
    case LTD_ERR_ARGUMENT: return "argument error";
    case LTD_ERR_FORMAT: return "format error";
    case LTD_ERR_LENGTH: return "length error";
    case LTD_ERR_DEGENERATE_IMAGE: return "degenerate image";
    case LTD_ERR_DOMAIN: return "domain error";
    case LTD_ERR_NUMERICAL: return "numerical error";
    case LTD_ERR_IO: return "I/O error";
    case LTD_ERR_DEGENERATE_DIRECTION: return "degenerate direction";
    case LTD_ERR_UNDERFLOW: return "underflow";
    case LTD_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

/* Image sets. */

ltd_status ltd_images_create(ltd_images** out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = new ltd_images;
  });
}

void ltd_images_destroy(ltd_images* images) { delete images; }

ltd_status ltd_images_load_idx(const char* path, int smooth, ltd_images** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "NULL argument");
    lotdepth::NormalizeOptions opts;
    opts.smooth = smooth != 0;
    auto set = std::make_unique<ltd_images>();
    set->items = lotdepth::LoadIdxImages(path, opts);
    *out = set.release();
  });
}

ltd_status ltd_labels_load_idx(const char* path, int* labels, size_t capacity,
                               size_t* count) {
  return Guard([&] {
    Require(path != nullptr, "path is NULL");
    const std::vector<int> l = lotdepth::LoadIdxLabels(path);
    if (count != nullptr) *count = l.size();
    if (labels == nullptr) return;
    RequireCapacity(capacity, l.size());
    std::copy(l.begin(), l.end(), labels);
  });
}

ltd_status ltd_images_append_file(ltd_images* images, const char* path) {
  return Guard([&] {
    Require(images != nullptr && path != nullptr, "NULL argument");
    images->items.push_back(
        lotdepth::LoadGrid(path, lotdepth::GridFormatFromPath(path)));
  });
}

ltd_status ltd_images_append_intensities(ltd_images* images, int width, int height,
                                         const double* intensities) {
  return Guard([&] {
    Require(images != nullptr && intensities != nullptr, "NULL argument");
    const lotdepth::PixelGrid grid(width, height);
    images->items.push_back(lotdepth::ImageHistogram::FromIntensities(
        grid, std::span<const double>(intensities, grid.size())));
  });
}

ltd_status ltd_images_append_synth_blob(ltd_images* images, int width, int height,
                                        double cx, double cy, double scale,
                                        uint64_t seed) {
  return Guard([&] {
    Require(images != nullptr, "images is NULL");
    images->items.push_back(lotdepth::SynthBlob(
        lotdepth::PixelGrid(width, height), {cx, cy}, scale, seed));
  });
}

ltd_status ltd_images_append_synth_gaussian(ltd_images* images, int width,
                                            int height, double cx, double cy,
                                            double sx, double sy, double rho,
                                            uint64_t seed) {
  return Guard([&] {
    Require(images != nullptr, "images is NULL");
    images->items.push_back(lotdepth::SynthGaussian(
        lotdepth::PixelGrid(width, height), {cx, cy}, sx, sy, rho, seed));
  });
}

ltd_status ltd_images_synth_dataset(size_t count, int width, int height,
                                    double outlier_fraction, uint64_t seed,
                                    ltd_images** out, int* labels, size_t capacity) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    lotdepth::BlobDatasetOptions opts;
    opts.width = width;
    opts.height = height;
    opts.outlier_fraction = outlier_fraction;
    lotdepth::LabeledImages data = lotdepth::SynthBlobDataset(count, opts, seed);
    if (labels != nullptr) {
      RequireCapacity(capacity, data.labels.size());
      std::copy(data.labels.begin(), data.labels.end(), labels);
    }
    auto set = std::make_unique<ltd_images>();
    set->items = std::move(data.images);
    *out = set.release();
  });
}

ltd_status ltd_images_append_from(ltd_images* images, const ltd_images* src,
                                  size_t index) {
  return Guard([&] {
    Require(images != nullptr, "images is NULL");
    lotdepth::ImageHistogram copy = At(src, index);
    images->items.push_back(std::move(copy));
  });
}

size_t ltd_images_count(const ltd_images* images) {
  return images == nullptr ? 0 : images->items.size();
}

ltd_status ltd_images_shape(const ltd_images* images, size_t index, int* width,
                            int* height) {
  return Guard([&] {
    const auto& img = At(images, index);
    if (width != nullptr) *width = img.grid().width();
    if (height != nullptr) *height = img.grid().height();
  });
}

ltd_status ltd_images_get(const ltd_images* images, size_t index, double* weights,
                          size_t capacity) {
  return Guard([&] {
    const auto& img = At(images, index);
    Require(weights != nullptr, "weights is NULL");
    RequireCapacity(capacity, img.size());
    std::copy(img.weights().begin(), img.weights().end(), weights);
  });
}

ltd_status ltd_images_write_pgm(const ltd_images* images, size_t index,
                                const char* path) {
  return Guard([&] {
    Require(path != nullptr, "path is NULL");
    lotdepth::WritePgm(At(images, index), path);
  });
}

ltd_status ltd_images_write_idx(const ltd_images* images, const char* path) {
  return Guard([&] {
    Require(images != nullptr && path != nullptr, "NULL argument");
    lotdepth::WriteIdxImages(images->items, path);
  });
}

ltd_status ltd_labels_write_idx(const int* labels, size_t count, const char* path) {
  return Guard([&] {
    Require(path != nullptr && (labels != nullptr || count == 0), "NULL argument");
    lotdepth::WriteIdxLabels(std::span<const int>(labels, count), path);
  });
}

ltd_status ltd_images_downscale(const ltd_images* images, int width, int height,
                                ltd_images** out) {
  return Guard([&] {
    Require(images != nullptr && out != nullptr, "NULL argument");
    auto set = std::make_unique<ltd_images>();
    set->items.reserve(images->items.size());
    for (const auto& img : images->items) {
      set->items.push_back(lotdepth::Downscale(img, width, height));
    }
    *out = set.release();
  });
}

ltd_status ltd_wasserstein(const ltd_images* a, size_t ia, const ltd_images* b,
                           size_t ib, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = lotdepth::Wasserstein(At(a, ia), At(b, ib));
  });
}

/* Pipeline. */

void ltd_pipeline_options_default(ltd_pipeline_options* options) {
  if (options == nullptr) return;
  const lotdepth::PipelineOptions d;
  options->template_origin = LTD_TEMPLATE_ARGMIN_TO_MEAN;
  options->template_index = d.template_index;
  options->dim = static_cast<int>(d.dim);
  options->pca_convention = LTD_PCA_ORTHONORMAL;
  options->weighted_pca = d.weighted_pca ? 1 : 0;
  options->reference_kind = LTD_REFERENCE_SPHERE;
  options->reference_size = static_cast<size_t>(d.reference_size);
  options->eps_start = d.eps_start;
  options->eps_end = d.eps_end;
  options->eps_stages = d.eps_stages;
  options->seed = d.seed;
}

ltd_status ltd_pipeline_fit(const ltd_images* images,
                            const ltd_pipeline_options* options,
                            ltd_pipeline** out) {
  return Guard([&] {
    Require(images != nullptr && out != nullptr, "NULL argument");
    ltd_pipeline_options defaults;
    ltd_pipeline_options_default(&defaults);
    const ltd_pipeline_options& o = options != nullptr ? *options : defaults;
    auto p = std::make_unique<ltd_pipeline>();
    p->p = lotdepth::FitPipeline(images->items, ToOptions(o));
    *out = p.release();
  });
}

ltd_status ltd_pipeline_save(const ltd_pipeline* pipeline, const char* path) {
  return Guard([&] {
    Require(pipeline != nullptr && path != nullptr, "NULL argument");
    lotdepth::SavePipeline(pipeline->p, path);
  });
}

ltd_status ltd_pipeline_load(const char* path, ltd_pipeline** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "NULL argument");
    auto p = std::make_unique<ltd_pipeline>();
    p->p = lotdepth::LoadPipeline(path);
    *out = p.release();
  });
}

void ltd_pipeline_destroy(ltd_pipeline* pipeline) { delete pipeline; }

ltd_status ltd_pipeline_info_get(const ltd_pipeline* pipeline,
                                 ltd_pipeline_info* info) {
  return Guard([&] {
    Require(pipeline != nullptr && info != nullptr, "NULL argument");
    const lotdepth::Pipeline& p = pipeline->p;
    info->count = p.training.size();
    info->dim = static_cast<int>(p.dim());
    info->width = p.grid().width();
    info->height = p.grid().height();
    info->template_index =
        p.templ.source_index ? static_cast<long long>(*p.templ.source_index) : -1;
    info->reference_size = static_cast<size_t>(p.quantiles.reference.points.rows());
    info->final_epsilon = p.quantiles.final_epsilon;
    info->hard_strict = p.quantiles.hard_strict ? 1 : 0;
  });
}

ltd_status ltd_pipeline_training_images(const ltd_pipeline* pipeline,
                                        ltd_images** out) {
  return Guard([&] {
    Require(pipeline != nullptr && out != nullptr, "NULL argument");
    auto set = std::make_unique<ltd_images>();
    set->items = pipeline->p.training;
    *out = set.release();
  });
}

ltd_status ltd_pipeline_explained_variance(const ltd_pipeline* pipeline,
                                           double* ratios, size_t capacity) {
  return Guard([&] {
    Require(pipeline != nullptr && ratios != nullptr, "NULL argument");
    const Eigen::VectorXd r = pipeline->p.pca.ExplainedVarianceRatio();
    RequireCapacity(capacity, static_cast<std::size_t>(r.size()));
    std::copy(r.data(), r.data() + r.size(), ratios);
  });
}

ltd_status ltd_pipeline_latents(const ltd_pipeline* pipeline, double* latents,
                                size_t capacity) {
  return Guard([&] {
    Require(pipeline != nullptr && latents != nullptr, "NULL argument");
    const Eigen::MatrixXd& z = pipeline->p.latents;
    RequireCapacity(capacity, static_cast<std::size_t>(z.size()));
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
      for (Eigen::Index j = 0; j < z.cols(); ++j) latents[i * z.cols() + j] = z(i, j);
    }
  });
}

ltd_status ltd_pipeline_depths(const ltd_pipeline* pipeline, const ltd_images* images,
                               ltd_depth_record* records, size_t capacity) {
  return Guard([&] {
    Require(records != nullptr, "records is NULL");
    const lotdepth::DepthReport report = Depths(pipeline, images);
    RequireCapacity(capacity, report.records.size());
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      const auto& r = report.records[i];
      records[i] = {r.inner, r.outer, r.rank_norm(), r.residual};
    }
  });
}

ltd_status ltd_pipeline_write_depth_report(const ltd_pipeline* pipeline,
                                           const ltd_images* images, int format,
                                           const char* path) {
  return Guard([&] {
    Require(path != nullptr, "path is NULL");
    Require(format == LTD_FORMAT_CSV || format == LTD_FORMAT_JSON, "unknown format");
    const lotdepth::DepthReport report = Depths(pipeline, images);
    lotdepth::WriteFile(path, format == LTD_FORMAT_CSV
                                  ? lotdepth::DepthReportCsv(report)
                                  : lotdepth::DepthReportJson(report));
  });
}

ltd_status ltd_pipeline_quantile(const ltd_pipeline* pipeline, const double* u,
                                 int mode, double* x_out, size_t* data_index) {
  return Guard([&] {
    Require(pipeline != nullptr && u != nullptr && x_out != nullptr, "NULL argument");
    const auto& q = pipeline->p.quantiles;
    const Eigen::VectorXd uv =
        Eigen::Map<const Eigen::VectorXd>(u, pipeline->p.dim());
    const lotdepth::RankMode m = ToMode(mode);
    const Eigen::VectorXd x = lotdepth::Quantile(uv, q, m);
    std::copy(x.data(), x.data() + x.size(), x_out);
    if (data_index != nullptr) {
      *data_index = m == lotdepth::RankMode::kHard
                        ? static_cast<size_t>(lotdepth::HardQuantileIndex(uv, q))
                        : static_cast<size_t>(-1);
    }
  });
}

ltd_status ltd_pipeline_rank(const ltd_pipeline* pipeline, const double* x, int mode,
                             double* rank_out) {
  return Guard([&] {
    Require(pipeline != nullptr && x != nullptr && rank_out != nullptr,
            "NULL argument");
    const Eigen::VectorXd xv =
        Eigen::Map<const Eigen::VectorXd>(x, pipeline->p.dim());
    const Eigen::VectorXd r = lotdepth::Rank(xv, pipeline->p.quantiles, ToMode(mode));
    std::copy(r.data(), r.data() + r.size(), rank_out);
  });
}

ltd_status ltd_pipeline_latent_to_image(const ltd_pipeline* pipeline,
                                        const double* x, ltd_images* append_to) {
  return Guard([&] {
    Require(pipeline != nullptr && x != nullptr && append_to != nullptr,
            "NULL argument");
    const Eigen::VectorXd xv =
        Eigen::Map<const Eigen::VectorXd>(x, pipeline->p.dim());
    append_to->items.push_back(lotdepth::LatentToImage(xv, pipeline->p));
  });
}

/* Depth helpers. */

ltd_status ltd_order_statistics(const double* depths, size_t n, size_t* order) {
  return Guard([&] {
    Require((depths != nullptr && order != nullptr) || n == 0, "NULL argument");
    const auto o = lotdepth::OrderStatistics(std::span<const double>(depths, n));
    std::copy(o.begin(), o.end(), order);
  });
}

ltd_status ltd_five_summary_positions(size_t n, size_t positions[5]) {
  return Guard([&] {
    Require(positions != nullptr, "positions is NULL");
    const auto p = lotdepth::FiveSummaryPositions(n);
    std::copy(p.begin(), p.end(), positions);
  });
}

ltd_status ltd_tukey_depth_spherical(double r, int d, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = lotdepth::TukeyDepthSpherical(r, d);
  });
}

/* Two-sample test. */

ltd_status ltd_two_sample_test(const ltd_images* a, const ltd_images* b, int dim,
                               double alpha, uint64_t seed,
                               ltd_test_result* result) {
  return Guard([&] {
    Require(a != nullptr && b != nullptr && result != nullptr, "NULL argument");
    Fill(result, lotdepth::TwoSampleTest(a->items, b->items, dim, alpha, seed));
  });
}

ltd_status ltd_two_sample_test_latent(const double* a, size_t m, const double* b,
                                      size_t n, int d, double alpha, uint64_t seed,
                                      ltd_test_result* result) {
  return Guard([&] {
    Require(result != nullptr, "result is NULL");
    Fill(result, lotdepth::TwoSampleTestLatent(RowMajorToMatrix(a, m, d),
                                               RowMajorToMatrix(b, n, d), alpha,
                                               seed));
  });
}

ltd_status ltd_rejection_rate_images(const ltd_images* pool_a,
                                     const ltd_images* pool_b, size_t m, size_t n,
                                     int dim, double alpha, int repetitions,
                                     uint64_t seed, double* rate) {
  return Guard([&] {
    Require(pool_a != nullptr && pool_b != nullptr && rate != nullptr,
            "NULL argument");
    Require(repetitions >= 1, "repetitions must be >= 1");
    const auto& ia = pool_a->items;
    const auto& ib = pool_b->items;
    if (pool_a == pool_b) {
      // Disjoint halves of one shuffle per repetition, looked up by the
      // child seeds the harness hands to each sampler.
      std::map<std::uint64_t, std::vector<std::size_t>> first, second;
      for (int r = 0; r < repetitions; ++r) {
        const std::uint64_t s_r = lotdepth::RepetitionSeed(seed, r);
        std::vector<std::size_t> d = DrawIndices(
            ia.size(), m + n,
            lotdepth::DeriveSeed(s_r, lotdepth::seed_stream::kSubsample));
        second[lotdepth::DeriveSeed(s_r, 2)].assign(d.begin() + m, d.end());
        d.resize(m);
        first[lotdepth::DeriveSeed(s_r, 1)] = std::move(d);
      }
      auto sampler = [&ia](const std::map<std::uint64_t, std::vector<std::size_t>>& draws) {
        return lotdepth::ImageSampler([&ia, &draws](std::size_t, std::uint64_t s) {
          std::vector<lotdepth::ImageHistogram> out;
          for (std::size_t i : draws.at(s)) out.push_back(ia[i]);
          return out;
        });
      };
      *rate = lotdepth::RejectionRateImages(sampler(first), sampler(second), m, n,
                                            dim, alpha, repetitions, seed);
      return;
    }
    auto sampler = [](const std::vector<lotdepth::ImageHistogram>& pool) {
      return lotdepth::ImageSampler([&pool](std::size_t count, std::uint64_t s) {
        std::vector<lotdepth::ImageHistogram> out;
        for (std::size_t i : DrawIndices(pool.size(), count, s)) out.push_back(pool[i]);
        return out;
      });
    };
    *rate = lotdepth::RejectionRateImages(sampler(ia), sampler(ib), m, n, dim, alpha,
                                          repetitions, seed);
  });
}

ltd_status ltd_test_result_write_json(const ltd_test_result* result,
                                      const char* path) {
  return Guard([&] {
    Require(result != nullptr && path != nullptr, "NULL argument");
    lotdepth::TestResult r;
    r.statistic = result->statistic;
    r.dof = result->dof;
    r.critical_value = result->critical_value;
    r.alpha = result->alpha;
    r.reject = result->reject != 0;
    r.m = result->m;
    r.n = result->n;
    lotdepth::WriteFile(path, lotdepth::TestResultJson(r));
  });
}

ltd_status ltd_chi2_quantile(int d, double prob, double* out) {
  return Guard([&] {
    Require(out != nullptr, "out is NULL");
    *out = lotdepth::Chi2Quantile(d, prob);
  });
}

/* Outlier detection. */

ltd_status ltd_outlier_calibrate(const ltd_pipeline* pipeline,
                                 const ltd_images* calibration, double alpha,
                                 ltd_outlier_model** out) {
  return Guard([&] {
    Require(pipeline != nullptr && calibration != nullptr && out != nullptr,
            "NULL argument");
    auto m = std::make_unique<ltd_outlier_model>();
    m->m = lotdepth::Calibrate(calibration->items, pipeline->p, alpha);
    *out = m.release();
  });
}

void ltd_outlier_destroy(ltd_outlier_model* model) { delete model; }

ltd_status ltd_outlier_thresholds(const ltd_outlier_model* model, double* inner,
                                  double* outer, int* fallback) {
  return Guard([&] {
    Require(model != nullptr, "model is NULL");
    if (inner != nullptr) *inner = model->m.inner_threshold;
    if (outer != nullptr) *outer = model->m.outer_threshold;
    if (fallback != nullptr) *fallback = model->m.fallback ? 1 : 0;
  });
}

ltd_status ltd_outlier_classify(const ltd_pipeline* pipeline,
                                const ltd_outlier_model* model,
                                const ltd_images* images, ltd_verdict* verdicts,
                                size_t capacity) {
  return Guard([&] {
    Require(model != nullptr && images != nullptr && verdicts != nullptr,
            "NULL argument");
    const lotdepth::DepthReport report = Depths(pipeline, images);
    RequireCapacity(capacity, report.records.size());
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      const auto& r = report.records[i];
      const lotdepth::Verdict v = lotdepth::ClassifyDepths(r.inner, r.outer, model->m);
      verdicts[i] = {v.is_outlier ? 1 : 0, v.inner, v.outer};
    }
  });
}

ltd_status ltd_outlier_write_ddplot(const ltd_pipeline* pipeline,
                                    const ltd_outlier_model* model,
                                    const ltd_images* images, const int* labels,
                                    const char* path) {
  return Guard([&] {
    Require(model != nullptr && images != nullptr && path != nullptr,
            "NULL argument");
    const lotdepth::DepthReport report = Depths(pipeline, images);
    std::span<const int> l;
    if (labels != nullptr) l = std::span<const int>(labels, report.records.size());
    lotdepth::WriteFile(path, lotdepth::DdPlotCsv(report, model->m, l));
  });
}

ltd_status ltd_outlier_roc(const ltd_pipeline* pipeline,
                           const ltd_outlier_model* model, const ltd_images* images,
                           const int* truth, int kind, const char* path,
                           double* auc) {
  return Guard([&] {
    Require(model != nullptr && images != nullptr && truth != nullptr,
            "NULL argument");
    Require(kind >= LTD_SCORE_INNER && kind <= LTD_SCORE_MIN_QUANTILE,
            "unknown score kind");
    const lotdepth::DepthReport report = Depths(pipeline, images);
    std::vector<double> scores;
    std::vector<char> flags;
    for (std::size_t i = 0; i < report.records.size(); ++i) {
      const auto& r = report.records[i];
      scores.push_back(lotdepth::OutlierScore(
          r.inner, r.outer, model->m, static_cast<lotdepth::ScoreKind>(kind)));
      flags.push_back(truth[i] != 0 ? 1 : 0);
    }
    const lotdepth::RocResult roc = lotdepth::RocAuc(scores, flags);
    if (path != nullptr) lotdepth::WriteFile(path, lotdepth::RocCsv(roc));
    if (auc != nullptr) *auc = roc.auc;
  });
}

ltd_status ltd_roc_auc(const double* scores, const int* truth, size_t n,
                       double* auc) {
  return Guard([&] {
    Require(scores != nullptr && truth != nullptr && auc != nullptr, "NULL argument");
    std::vector<char> flags(n);
    for (size_t i = 0; i < n; ++i) flags[i] = truth[i] != 0 ? 1 : 0;
    *auc = lotdepth::RocAuc(std::span<const double>(scores, n), flags).auc;
  });
}

}  // extern "C"
