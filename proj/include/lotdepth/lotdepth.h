/* Copyright 2026 The lotdepth Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * lotdepth C API.
 *
 * Every fallible call returns an ltd_status; on failure a description is
 * available from ltd_last_error() on the calling thread until the next
 * call on that thread. Objects are opaque handles released with the
 * matching *_destroy function (NULL is accepted). Buffers are owned by the
 * caller; functions that fill arrays take a capacity and report the
 * required size through an out-parameter, failing with LTD_ERR_LENGTH when
 * the capacity is too small.
 */

#ifndef LOTDEPTH_LOTDEPTH_H_
#define LOTDEPTH_LOTDEPTH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LOTDEPTH_BUILDING)
#define LTD_API __declspec(dllexport)
#else
#define LTD_API __declspec(dllimport)
#endif
#else
#define LTD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ltd_status {
  LTD_OK = 0,
  LTD_ERR_ARGUMENT = 1,
  LTD_ERR_FORMAT = 2,
  LTD_ERR_LENGTH = 3,
  LTD_ERR_DEGENERATE_IMAGE = 4,
  LTD_ERR_DOMAIN = 5,
  LTD_ERR_NUMERICAL = 6,
  LTD_ERR_IO = 7,
  LTD_ERR_DEGENERATE_DIRECTION = 8,
  LTD_ERR_UNDERFLOW = 9,
  LTD_ERR_INTERNAL = 100
} ltd_status;

LTD_API const char* ltd_version(void);
LTD_API const char* ltd_last_error(void);
LTD_API const char* ltd_status_name(ltd_status status);

/* ---- Image sets ------------------------------------------------------ */

typedef struct ltd_images ltd_images;

LTD_API ltd_status ltd_images_create(ltd_images** out);
LTD_API void ltd_images_destroy(ltd_images* images);

/* IDX image file (plain or gzip). smooth != 0 adds 1e-9 per pixel. */
LTD_API ltd_status ltd_images_load_idx(const char* path, int smooth,
                                       ltd_images** out);
/* IDX label file; `labels` may be NULL to query the count. */
LTD_API ltd_status ltd_labels_load_idx(const char* path, int* labels,
                                       size_t capacity, size_t* count);

/* Appends one PGM (P2/P5) or CSV grid; the format follows the extension. */
LTD_API ltd_status ltd_images_append_file(ltd_images* images, const char* path);
/* Appends raw nonnegative intensities (row-major, width * height). */
LTD_API ltd_status ltd_images_append_intensities(ltd_images* images, int width,
                                                 int height,
                                                 const double* intensities);
LTD_API ltd_status ltd_images_append_synth_blob(ltd_images* images, int width,
                                                int height, double cx,
                                                double cy, double scale,
                                                uint64_t seed);
LTD_API ltd_status ltd_images_append_synth_gaussian(
    ltd_images* images, int width, int height, double cx, double cy,
    double sx, double sy, double rho, uint64_t seed);
/* Seeded blob corpus of `count` images with round(outlier_fraction * count)
 * planted outliers (shifted or elongated blobs). `labels` (may be NULL)
 * receives 1 for planted outliers, 0 otherwise. */
LTD_API ltd_status ltd_images_synth_dataset(size_t count, int width, int height,
                                            double outlier_fraction,
                                            uint64_t seed, ltd_images** out,
                                            int* labels, size_t capacity);
/* Appends image `index` of `src`. */
LTD_API ltd_status ltd_images_append_from(ltd_images* images,
                                          const ltd_images* src, size_t index);

LTD_API size_t ltd_images_count(const ltd_images* images);
LTD_API ltd_status ltd_images_shape(const ltd_images* images, size_t index,
                                    int* width, int* height);
LTD_API ltd_status ltd_images_get(const ltd_images* images, size_t index,
                                  double* weights, size_t capacity);
LTD_API ltd_status ltd_images_write_pgm(const ltd_images* images, size_t index,
                                        const char* path);
LTD_API ltd_status ltd_images_write_idx(const ltd_images* images,
                                        const char* path);
LTD_API ltd_status ltd_labels_write_idx(const int* labels, size_t count,
                                        const char* path);
/* Bilinear resampling of every image into a new set. */
LTD_API ltd_status ltd_images_downscale(const ltd_images* images, int width,
                                        int height, ltd_images** out);
/* sqrt of the exact squared-distance transport cost. */
LTD_API ltd_status ltd_wasserstein(const ltd_images* a, size_t ia,
                                   const ltd_images* b, size_t ib,
                                   double* out);

/* ---- Fitted pipeline -------------------------------------------------- */

typedef enum ltd_template_origin {
  LTD_TEMPLATE_ARGMIN_TO_MEAN = 0,
  LTD_TEMPLATE_PIXELWISE_MEAN = 1,
  LTD_TEMPLATE_EXPLICIT_INDEX = 2
} ltd_template_origin;

typedef enum ltd_reference_kind {
  LTD_REFERENCE_SPHERE = 0,
  LTD_REFERENCE_GAUSS = 1
} ltd_reference_kind;

typedef enum ltd_pca_convention {
  LTD_PCA_ORTHONORMAL = 0,
  LTD_PCA_PAPER_SCALED = 1
} ltd_pca_convention;

typedef enum ltd_rank_mode { LTD_RANK_HARD = 0, LTD_RANK_ENTROPIC = 1 } ltd_rank_mode;

typedef enum ltd_format { LTD_FORMAT_CSV = 0, LTD_FORMAT_JSON = 1 } ltd_format;

typedef struct ltd_pipeline_options {
  int template_origin; /* ltd_template_origin */
  size_t template_index;
  int dim;
  int pca_convention; /* ltd_pca_convention */
  int weighted_pca;
  int reference_kind; /* ltd_reference_kind */
  size_t reference_size; /* 0: number of images */
  double eps_start;      /* multiples of the cost scale */
  double eps_end;
  int eps_stages;
  uint64_t seed;
} ltd_pipeline_options;

typedef struct ltd_pipeline_info {
  size_t count;
  int dim;
  int width;
  int height;
  long long template_index; /* -1 when the template is not a dataset image */
  size_t reference_size;
  double final_epsilon;
  int hard_strict;
} ltd_pipeline_info;

typedef struct ltd_pipeline ltd_pipeline;

LTD_API void ltd_pipeline_options_default(ltd_pipeline_options* options);
LTD_API ltd_status ltd_pipeline_fit(const ltd_images* images,
                                    const ltd_pipeline_options* options,
                                    ltd_pipeline** out);
LTD_API ltd_status ltd_pipeline_save(const ltd_pipeline* pipeline,
                                     const char* path);
LTD_API ltd_status ltd_pipeline_load(const char* path, ltd_pipeline** out);
LTD_API void ltd_pipeline_destroy(ltd_pipeline* pipeline);
LTD_API ltd_status ltd_pipeline_info_get(const ltd_pipeline* pipeline,
                                         ltd_pipeline_info* info);
/* Training images stored in the pipeline, as a new set. */
LTD_API ltd_status ltd_pipeline_training_images(const ltd_pipeline* pipeline,
                                                ltd_images** out);
/* dim values. */
LTD_API ltd_status ltd_pipeline_explained_variance(const ltd_pipeline* pipeline,
                                                   double* ratios,
                                                   size_t capacity);
/* count x dim training latents, row-major. */
LTD_API ltd_status ltd_pipeline_latents(const ltd_pipeline* pipeline,
                                        double* latents, size_t capacity);

typedef struct ltd_depth_record {
  double inner;
  double outer;
  double rank_norm;
  double residual;
} ltd_depth_record;

/* Depths of `images`, or of the training images when `images` is NULL. */
LTD_API ltd_status ltd_pipeline_depths(const ltd_pipeline* pipeline,
                                       const ltd_images* images,
                                       ltd_depth_record* records,
                                       size_t capacity);
/* Same, written as a CSV or JSON report. */
LTD_API ltd_status ltd_pipeline_write_depth_report(const ltd_pipeline* pipeline,
                                                   const ltd_images* images,
                                                   int format, const char* path);
/* Quantile of level u (dim values): latent point in x_out (dim values),
 * and for hard mode the training index in data_index (may be NULL). */
LTD_API ltd_status ltd_pipeline_quantile(const ltd_pipeline* pipeline,
                                         const double* u, int mode,
                                         double* x_out, size_t* data_index);
/* Entropic (or hard) rank of a latent point. */
LTD_API ltd_status ltd_pipeline_rank(const ltd_pipeline* pipeline,
                                     const double* x, int mode, double* rank_out);
/* Reconstructs a latent point and pushes the template along it. */
LTD_API ltd_status ltd_pipeline_latent_to_image(const ltd_pipeline* pipeline,
                                                const double* x,
                                                ltd_images* append_to);

/* ---- Depth helpers ---------------------------------------------------- */

/* Positions sorted by nonincreasing depth (stable), 0-based. */
LTD_API ltd_status ltd_order_statistics(const double* depths, size_t n,
                                        size_t* order);
/* 1-based summary positions 1, ceil(n/4), ceil(n/2), ceil(3n/4), n. */
LTD_API ltd_status ltd_five_summary_positions(size_t n, size_t positions[5]);
LTD_API ltd_status ltd_tukey_depth_spherical(double r, int d, double* out);

/* ---- Two-sample test -------------------------------------------------- */

typedef struct ltd_test_result {
  double statistic;
  int dof;
  double critical_value;
  double alpha;
  int reject;
  size_t m;
  size_t n;
} ltd_test_result;

LTD_API ltd_status ltd_two_sample_test(const ltd_images* a, const ltd_images* b,
                                       int dim, double alpha, uint64_t seed,
                                       ltd_test_result* result);
/* Row-major m x d and n x d latent samples. */
LTD_API ltd_status ltd_two_sample_test_latent(const double* a, size_t m,
                                              const double* b, size_t n, int d,
                                              double alpha, uint64_t seed,
                                              ltd_test_result* result);
/* Rejection rate over repetitions; each draws m images from pool_a and n
 * from pool_b without replacement (disjoint draws when the pools are the
 * same object). */
LTD_API ltd_status ltd_rejection_rate_images(const ltd_images* pool_a,
                                             const ltd_images* pool_b, size_t m,
                                             size_t n, int dim, double alpha,
                                             int repetitions, uint64_t seed,
                                             double* rate);
LTD_API ltd_status ltd_test_result_write_json(const ltd_test_result* result,
                                              const char* path);
LTD_API ltd_status ltd_chi2_quantile(int d, double prob, double* out);

/* ---- Outlier detection ------------------------------------------------ */

typedef struct ltd_outlier_model ltd_outlier_model;

typedef struct ltd_verdict {
  int is_outlier;
  double inner;
  double outer;
} ltd_verdict;

typedef enum ltd_score_kind {
  LTD_SCORE_INNER = 0,
  LTD_SCORE_OUTER = 1,
  LTD_SCORE_MIN_QUANTILE = 2
} ltd_score_kind;

LTD_API ltd_status ltd_outlier_calibrate(const ltd_pipeline* pipeline,
                                         const ltd_images* calibration,
                                         double alpha, ltd_outlier_model** out);
LTD_API void ltd_outlier_destroy(ltd_outlier_model* model);
LTD_API ltd_status ltd_outlier_thresholds(const ltd_outlier_model* model,
                                          double* inner, double* outer,
                                          int* fallback);
LTD_API ltd_status ltd_outlier_classify(const ltd_pipeline* pipeline,
                                        const ltd_outlier_model* model,
                                        const ltd_images* images,
                                        ltd_verdict* verdicts, size_t capacity);
/* Labels may be NULL. */
LTD_API ltd_status ltd_outlier_write_ddplot(const ltd_pipeline* pipeline,
                                            const ltd_outlier_model* model,
                                            const ltd_images* images,
                                            const int* labels, const char* path);
/* Scores from `kind`; truth[i] != 0 marks a true outlier. Writes the ROC
 * CSV when path is not NULL. */
LTD_API ltd_status ltd_outlier_roc(const ltd_pipeline* pipeline,
                                   const ltd_outlier_model* model,
                                   const ltd_images* images, const int* truth,
                                   int kind, const char* path, double* auc);
LTD_API ltd_status ltd_roc_auc(const double* scores, const int* truth, size_t n,
                               double* auc);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* LOTDEPTH_LOTDEPTH_H_ */
