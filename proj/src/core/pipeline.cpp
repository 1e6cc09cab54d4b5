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

#include "core/pipeline.hpp"

#include <string>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace lotdepth {

Eigen::VectorXd MetricWeights(const ImageHistogram& templ) {
  Eigen::VectorXd w(2 * static_cast<Eigen::Index>(templ.size()));
  for (std::size_t k = 0; k < templ.size(); ++k) {
    w[2 * k] = templ.weight(k);
    w[2 * k + 1] = templ.weight(k);
  }
  return w;
}

Eigen::MatrixXd EmbedAll(std::span<const ImageHistogram> images,
                         const TemplateModel& templ) {
  const Eigen::Index cols = 2 * static_cast<Eigen::Index>(templ.image.size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(images.size()), cols);
  ParallelFor(images.size(), [&](std::size_t i) {
    out.row(static_cast<Eigen::Index>(i)) = Flatten(LogMap(images[i], templ)).transpose();
  });
  return out;
}

Pipeline FitPipeline(std::span<const ImageHistogram> images,
                     const PipelineOptions& options) {
  if (images.size() < 2) throw ArgumentError("pipeline needs at least 2 images");
  Pipeline p;
  p.options = options;
  p.templ = SelectTemplate(images, options.template_origin, options.template_index);
  p.training.assign(images.begin(), images.end());
  p.embeddings = EmbedAll(images, p.templ);

  PcaOptions pca_options;
  pca_options.convention = options.convention;
  pca_options.weighted = options.weighted_pca;
  if (options.weighted_pca) pca_options.metric_weights = MetricWeights(p.templ.image);
  p.pca = FitPca(p.embeddings, options.dim, pca_options);
  p.latents = ProjectRows(p.embeddings, p.pca);

  const Eigen::Index m = options.reference_size > 0
                             ? options.reference_size
                             : static_cast<Eigen::Index>(images.size());
  const ReferenceSample ref =
      SampleReference(m, options.dim, options.reference_kind,
                      DeriveSeed(options.seed, seed_stream::kReference));
  FitOptions fit;
  fit.eps_start_factor = options.eps_start;
  fit.eps_end_factor = options.eps_end;
  fit.stages = options.eps_stages;
  p.quantiles = FitPotentials(p.latents, ref, fit);
  return p;
}

Embedding EmbedTangent(const Eigen::VectorXd& tangent, const Pipeline& pipeline) {
  Embedding e;
  e.tangent = tangent;
  e.latent = Project(tangent, pipeline.pca);
  e.residual = ResidualDistance(tangent, pipeline.pca);
  return e;
}

Embedding EmbedImage(const ImageHistogram& image, const Pipeline& pipeline) {
  return EmbedTangent(Flatten(LogMap(image, pipeline.templ)), pipeline);
}

ImageHistogram LatentToImage(const Eigen::VectorXd& latent,
                             const Pipeline& pipeline) {
  const Eigen::VectorXd v = Reconstruct(latent, pipeline.pca);
  return ExpMap(Unflatten(pipeline.grid(), v), pipeline.templ);
}

}  // namespace lotdepth
