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

// The fitted chain template -> Log map -> PCA -> MK potentials, and the
// embedding of new images through it.

#ifndef LOTDEPTH_CORE_PIPELINE_HPP_
#define LOTDEPTH_CORE_PIPELINE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "core/image_histogram.hpp"
#include "core/lot_embedding.hpp"
#include "core/mk_quantiles.hpp"
#include "core/pca.hpp"

namespace lotdepth {

struct PipelineOptions {
  TemplateOrigin template_origin = TemplateOrigin::kArgminToMean;
  std::size_t template_index = 0;  // for kExplicitIndex
  Eigen::Index dim = 2;
  PcaConvention convention = PcaConvention::kOrthonormal;
  bool weighted_pca = false;
  ReferenceKind reference_kind = ReferenceKind::kSphericalUniform;
  Eigen::Index reference_size = 0;  // 0: same as the number of images
  // Schedule endpoints as multiples of EpsilonScale.
  double eps_start = 1.0;
  double eps_end = 1e-3;
  int eps_stages = 10;
  std::uint64_t seed = 0;
};

struct Pipeline {
  PipelineOptions options;
  TemplateModel templ;
  PcaModel pca;
  QuantileModel quantiles;
  std::vector<ImageHistogram> training;  // images the pipeline was fit on
  Eigen::MatrixXd embeddings;            // n x 2p flattened tangent vectors
  Eigen::MatrixXd latents;               // n x d

  Eigen::Index dim() const { return pca.dim(); }
  const PixelGrid& grid() const { return templ.image.grid(); }
};

// Template weights duplicated per coordinate, matching Flatten.
Eigen::VectorXd MetricWeights(const ImageHistogram& templ);

// Rows are Flatten(LogMap(image)) in input order (parallel over images).
Eigen::MatrixXd EmbedAll(std::span<const ImageHistogram> images,
                         const TemplateModel& templ);

// Throws ArgumentError on an empty set, mixed grids, or a bad dimension;
// propagates solver errors.
Pipeline FitPipeline(std::span<const ImageHistogram> images,
                     const PipelineOptions& options);

struct Embedding {
  Eigen::VectorXd tangent;  // 2p
  Eigen::VectorXd latent;   // d
  double residual = 0.0;
};

Embedding EmbedImage(const ImageHistogram& image, const Pipeline& pipeline);
// Latent and residual of an already flattened tangent vector.
Embedding EmbedTangent(const Eigen::VectorXd& tangent, const Pipeline& pipeline);

// Reconstruct in the tangent space, then push the template forward.
ImageHistogram LatentToImage(const Eigen::VectorXd& latent,
                             const Pipeline& pipeline);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_PIPELINE_HPP_
