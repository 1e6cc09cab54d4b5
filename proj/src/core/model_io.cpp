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

#include "core/model_io.hpp"

#include <cinttypes>
#include <cstdio>

#include "core/errors.hpp"
#include "core/io_util.hpp"
#include "json.hpp"

namespace lotdepth {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatTag = "lotdepth-model";

Json MatrixToJson(const Eigen::MatrixXd& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  j["data"] = std::move(data);
  return j;
}

Eigen::MatrixXd MatrixFromJson(const Json& j, const char* what) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw FormatError(std::string("container: matrix '") + what + "' has inconsistent shape");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return m;
}

Json VectorToJson(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd VectorFromJson(const Json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
}

std::string HashHex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

Json OptionsToJson(const PipelineOptions& o) {
  Json j;
  j["template_origin"] = TemplateOriginName(o.template_origin);
  j["template_index"] = o.template_index;
  j["dim"] = o.dim;
  j["pca_convention"] = PcaConventionName(o.convention);
  j["weighted_pca"] = o.weighted_pca;
  j["reference_kind"] = ReferenceKindName(o.reference_kind);
  j["reference_size"] = o.reference_size;
  j["eps_start"] = o.eps_start;
  j["eps_end"] = o.eps_end;
  j["eps_stages"] = o.eps_stages;
  j["seed"] = o.seed;
  return j;
}

PipelineOptions OptionsFromJson(const Json& j) {
  PipelineOptions o;
  o.template_origin = TemplateOriginFromName(j.at("template_origin").get<std::string>());
  o.template_index = j.at("template_index").get<std::size_t>();
  o.dim = j.at("dim").get<Eigen::Index>();
  o.convention = PcaConventionFromName(j.at("pca_convention").get<std::string>());
  o.weighted_pca = j.at("weighted_pca").get<bool>();
  o.reference_kind = ReferenceKindFromName(j.at("reference_kind").get<std::string>());
  o.reference_size = j.at("reference_size").get<Eigen::Index>();
  o.eps_start = j.at("eps_start").get<double>();
  o.eps_end = j.at("eps_end").get<double>();
  o.eps_stages = j.at("eps_stages").get<int>();
  o.seed = j.at("seed").get<std::uint64_t>();
  return o;
}

}  // namespace

const char* TemplateOriginName(TemplateOrigin origin) {
  switch (origin) {
    case TemplateOrigin::kArgminToMean: return "argmin_to_mean";
    case TemplateOrigin::kPixelwiseMean: return "pixelwise_mean";
    case TemplateOrigin::kExplicitIndex: return "explicit_index";
  }
  return "argmin_to_mean";
}

TemplateOrigin TemplateOriginFromName(const std::string& name) {
  if (name == "argmin_to_mean") return TemplateOrigin::kArgminToMean;
  if (name == "pixelwise_mean") return TemplateOrigin::kPixelwiseMean;
  if (name == "explicit_index") return TemplateOrigin::kExplicitIndex;
  throw FormatError("unknown template origin '" + name + "'");
}

const char* ReferenceKindName(ReferenceKind kind) {
  return kind == ReferenceKind::kGaussian ? "gaussian" : "spherical_uniform";
}

ReferenceKind ReferenceKindFromName(const std::string& name) {
  if (name == "spherical_uniform") return ReferenceKind::kSphericalUniform;
  if (name == "gaussian") return ReferenceKind::kGaussian;
  throw FormatError("unknown reference kind '" + name + "'");
}

const char* PcaConventionName(PcaConvention convention) {
  return convention == PcaConvention::kPaperScaled ? "paper_scaled" : "orthonormal";
}

PcaConvention PcaConventionFromName(const std::string& name) {
  if (name == "orthonormal") return PcaConvention::kOrthonormal;
  if (name == "paper_scaled") return PcaConvention::kPaperScaled;
  throw FormatError("unknown PCA convention '" + name + "'");
}

std::string SerializePipeline(const Pipeline& p) {
  Json doc;
  doc["format"] = kFormatTag;
  doc["version"] = kContainerVersion;
  Json header;
  header["grid"] = {{"width", p.grid().width()}, {"height", p.grid().height()}};
  header["template_hash"] = HashHex(HashHistogram(p.templ.image));
  header["flattening_version"] = kFlatteningVersion;
  header["count"] = p.training.size();
  header["ambient_dim"] = p.pca.ambient_dim();
  header["dim"] = p.pca.dim();
  doc["header"] = std::move(header);
  doc["config"] = OptionsToJson(p.options);

  Json templ;
  templ["origin"] = TemplateOriginName(p.templ.origin);
  templ["source_index"] = p.templ.source_index ? Json(*p.templ.source_index) : Json(nullptr);
  templ["weights"] = std::vector<double>(p.templ.image.weights().begin(),
                                         p.templ.image.weights().end());
  doc["template"] = std::move(templ);

  Json pca;
  pca["convention"] = PcaConventionName(p.pca.convention);
  pca["weighted"] = p.pca.weighted;
  pca["mean"] = VectorToJson(p.pca.mean);
  pca["basis"] = MatrixToJson(p.pca.basis);
  pca["eigenvalues"] = VectorToJson(p.pca.eigenvalues);
  pca["total_variance"] = p.pca.total_variance;
  pca["metric_weights"] = VectorToJson(p.pca.metric_weights);
  doc["pca"] = std::move(pca);

  const QuantileModel& q = p.quantiles;
  Json quant;
  quant["reference"] = {{"kind", ReferenceKindName(q.reference.kind)},
                        {"seed", q.reference.seed},
                        {"points", MatrixToJson(q.reference.points)}};
  quant["psi"] = VectorToJson(q.psi);
  quant["conjugate"] = VectorToJson(q.conjugate);
  quant["schedule"] = q.schedule;
  quant["final_epsilon"] = q.final_epsilon;
  quant["assignment"] = q.assignment;
  quant["hard_psi"] = VectorToJson(q.hard_psi);
  quant["hard_conjugate"] = VectorToJson(q.hard_conjugate);
  quant["hard_margin"] = q.hard_margin;
  quant["hard_strict"] = q.hard_strict;
  doc["quantiles"] = std::move(quant);

  Eigen::MatrixXd training(static_cast<Eigen::Index>(p.training.size()),
                           static_cast<Eigen::Index>(p.grid().size()));
  for (std::size_t i = 0; i < p.training.size(); ++i) {
    for (std::size_t k = 0; k < p.grid().size(); ++k) {
      training(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = p.training[i].weight(k);
    }
  }
  doc["training"] = MatrixToJson(training);
  doc["embeddings"] = MatrixToJson(p.embeddings);
  doc["latents"] = MatrixToJson(p.latents);
  return doc.dump() + "\n";
}

Pipeline DeserializePipeline(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("container is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormatTag) {
      throw FormatError("not a lotdepth model container");
    }
    if (doc.at("version").get<int>() != kContainerVersion) {
      throw FormatError("unsupported container version " +
                        std::to_string(doc.at("version").get<int>()));
    }
    const Json& header = doc.at("header");
    if (header.at("flattening_version").get<int>() != kFlatteningVersion) {
      throw FormatError("unsupported flattening version");
    }
    Pipeline p;
    p.options = OptionsFromJson(doc.at("config"));
    const PixelGrid grid(header.at("grid").at("width").get<int>(),
                         header.at("grid").at("height").get<int>());
    const Json& templ = doc.at("template");
    p.templ.origin = TemplateOriginFromName(templ.at("origin").get<std::string>());
    if (!templ.at("source_index").is_null()) {
      p.templ.source_index = templ.at("source_index").get<std::size_t>();
    }
    p.templ.image = ImageHistogram(grid, templ.at("weights").get<std::vector<double>>());
    if (HashHex(HashHistogram(p.templ.image)) !=
        header.at("template_hash").get<std::string>()) {
      throw FormatError("template hash mismatch: container is corrupt");
    }

    const Json& pca = doc.at("pca");
    p.pca.convention = PcaConventionFromName(pca.at("convention").get<std::string>());
    p.pca.weighted = pca.at("weighted").get<bool>();
    p.pca.mean = VectorFromJson(pca.at("mean"));
    p.pca.basis = MatrixFromJson(pca.at("basis"), "pca.basis");
    p.pca.eigenvalues = VectorFromJson(pca.at("eigenvalues"));
    p.pca.total_variance = pca.at("total_variance").get<double>();
    p.pca.metric_weights = VectorFromJson(pca.at("metric_weights"));
    const Eigen::Index ambient = 2 * static_cast<Eigen::Index>(grid.size());
    if (p.pca.mean.size() != ambient || p.pca.basis.rows() != ambient ||
        p.pca.basis.cols() != p.pca.eigenvalues.size()) {
      throw FormatError("PCA block has inconsistent shapes");
    }

    const Json& quant = doc.at("quantiles");
    QuantileModel& q = p.quantiles;
    q.reference.kind = ReferenceKindFromName(quant.at("reference").at("kind").get<std::string>());
    q.reference.seed = quant.at("reference").at("seed").get<std::uint64_t>();
    q.reference.points = MatrixFromJson(quant.at("reference").at("points"), "reference");
    q.psi = VectorFromJson(quant.at("psi"));
    q.conjugate = VectorFromJson(quant.at("conjugate"));
    q.schedule = quant.at("schedule").get<std::vector<double>>();
    q.final_epsilon = quant.at("final_epsilon").get<double>();
    q.assignment = quant.at("assignment").get<std::vector<Eigen::Index>>();
    q.hard_psi = VectorFromJson(quant.at("hard_psi"));
    q.hard_conjugate = VectorFromJson(quant.at("hard_conjugate"));
    q.hard_margin = quant.at("hard_margin").get<double>();
    q.hard_strict = quant.at("hard_strict").get<bool>();

    const Eigen::MatrixXd training = MatrixFromJson(doc.at("training"), "training");
    if (training.cols() != static_cast<Eigen::Index>(grid.size())) {
      throw FormatError("training block does not match the grid");
    }
    p.training.reserve(static_cast<std::size_t>(training.rows()));
    for (Eigen::Index i = 0; i < training.rows(); ++i) {
      std::vector<double> w(static_cast<std::size_t>(training.cols()));
      for (Eigen::Index k = 0; k < training.cols(); ++k) w[static_cast<std::size_t>(k)] = training(i, k);
      p.training.emplace_back(grid, std::move(w));
    }
    p.embeddings = MatrixFromJson(doc.at("embeddings"), "embeddings");
    p.latents = MatrixFromJson(doc.at("latents"), "latents");
    if (p.embeddings.cols() != ambient || p.latents.cols() != p.pca.dim() ||
        p.embeddings.rows() != p.latents.rows() ||
        q.reference.points.cols() != p.latents.cols()) {
      throw FormatError("embedding blocks have inconsistent shapes");
    }
    if (header.at("count").get<Eigen::Index>() != p.latents.rows() ||
        header.at("ambient_dim").get<Eigen::Index>() != ambient ||
        header.at("dim").get<Eigen::Index>() != p.pca.dim() ||
        static_cast<Eigen::Index>(p.training.size()) != p.latents.rows()) {
      throw FormatError("header does not match the stored blocks");
    }
    if ((q.psi.size() != 0 && (q.psi.size() != q.reference.points.rows() ||
                               q.conjugate.size() != p.latents.rows())) ||
        (!q.assignment.empty() &&
         static_cast<Eigen::Index>(q.assignment.size()) != p.latents.rows())) {
      throw FormatError("quantile block has inconsistent shapes");
    }
    q.data = p.latents;
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed container: ") + e.what());
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("malformed container: ") + e.what());
  } catch (const DomainError& e) {
    throw FormatError(std::string("malformed container: ") + e.what());
  }
}

void SavePipeline(const Pipeline& pipeline, const std::string& path) {
  WriteFile(path, SerializePipeline(pipeline));
}

Pipeline LoadPipeline(const std::string& path) {
  return DeserializePipeline(ReadFile(path));
}

}  // namespace lotdepth
