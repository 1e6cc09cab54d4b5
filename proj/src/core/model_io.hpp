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

// Versioned JSON container for a fitted pipeline.
//
// Layout (keys in this order):
//   format             "lotdepth-model"
//   version            container version (kContainerVersion)
//   header             grid {width, height}, template_hash (FNV-1a, hex),
//                      flattening_version, count, ambient_dim, dim
//   config             the PipelineOptions used for the fit
//   template           origin, source_index, weights
//   pca                convention, weighted, mean, basis, eigenvalues,
//                      total_variance, metric_weights
//   quantiles          reference {kind, seed, points}, psi, conjugate,
//                      schedule, final_epsilon, assignment, hard_psi,
//                      hard_conjugate, hard_margin, hard_strict
//   training           weights of the training images
//   embeddings         flattened tangent vectors
//   latents            PCA coordinates (also the quantile data)
// Matrices are {rows, cols, data} with data in row-major order. Doubles are
// written in shortest round-trip form, so save -> load -> save is
// byte-identical.

#ifndef LOTDEPTH_CORE_MODEL_IO_HPP_
#define LOTDEPTH_CORE_MODEL_IO_HPP_

#include <string>

#include "core/pipeline.hpp"

namespace lotdepth {

inline constexpr int kContainerVersion = 1;

std::string SerializePipeline(const Pipeline& pipeline);
// Throws FormatError on a wrong format tag, version, template hash or
// inconsistent shapes.
Pipeline DeserializePipeline(const std::string& text);

void SavePipeline(const Pipeline& pipeline, const std::string& path);
Pipeline LoadPipeline(const std::string& path);

const char* TemplateOriginName(TemplateOrigin origin);
TemplateOrigin TemplateOriginFromName(const std::string& name);
const char* ReferenceKindName(ReferenceKind kind);
ReferenceKind ReferenceKindFromName(const std::string& name);
const char* PcaConventionName(PcaConvention convention);
PcaConvention PcaConventionFromName(const std::string& name);

}  // namespace lotdepth

#endif  // LOTDEPTH_CORE_MODEL_IO_HPP_
