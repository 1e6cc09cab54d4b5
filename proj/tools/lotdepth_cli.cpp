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


// lotdepth command-line tool. Links only the C API.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lotdepth/lotdepth.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Check(ltd_status s) {
  if (s != LTD_OK) {
    throw LibraryError(std::string(ltd_status_name(s)) + ": " + ltd_last_error());
  }
}

// A selection of images: files or directories, optionally filtered by an
// IDX label file.
struct InputSpec {
  std::vector<std::string> paths;
  std::string labels;
  int digit = -1;     // keep only this label; -1 keeps all
  std::size_t count = 0;  // keep the first `count` after filtering; 0 keeps all
};

// Everything a run depends on. Written to <out>/run_config.json and
// accepted back through --config.
struct RunConfig {
  std::string subcommand;
  InputSpec input;
  InputSpec input_b;      // second sample (test)
  InputSpec calibration;  // outlier calibration set
  std::string truth;      // IDX labels, nonzero = true outlier (outlier)
  std::string model;
  std::string template_mode = "argmin_to_mean";
  std::size_t template_index = 0;
  int dim = 2;
  std::string pca = "orthonormal";
  double eps_start = 1.0;
  double eps_end = 1e-3;
  int eps_stages = 10;
  std::string ref_kind = "sphere";
  std::size_t ref_size = 0;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string format = "csv";
  // test
  int reps = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  // outlier
  std::string score = "min_quantile";
  // summary
  std::string key = "inner";
  // synth
  std::size_t synth_count = 100;
  int width = 16;
  int height = 16;
  double outlier_fraction = 0.0;
};

json ToJson(const InputSpec& s) {
  return json{{"paths", s.paths}, {"labels", s.labels}, {"digit", s.digit},
              {"count", s.count}};
}

InputSpec InputFromJson(const json& j) {
  InputSpec s;
  s.paths = j.at("paths").get<std::vector<std::string>>();
  s.labels = j.at("labels").get<std::string>();
  s.digit = j.at("digit").get<int>();
  s.count = j.at("count").get<std::size_t>();
  return s;
}

json ToJson(const RunConfig& c) {
  return json{{"subcommand", c.subcommand},
              {"input", ToJson(c.input)},
              {"input_b", ToJson(c.input_b)},
              {"calibration", ToJson(c.calibration)},
              {"truth", c.truth},
              {"model", c.model},
              {"template", c.template_mode},
              {"template_index", c.template_index},
              {"dim", c.dim},
              {"pca", c.pca},
              {"eps_start", c.eps_start},
              {"eps_end", c.eps_end},
              {"eps_stages", c.eps_stages},
              {"ref_kind", c.ref_kind},
              {"ref_size", c.ref_size},
              {"alpha", c.alpha},
              {"seed", c.seed},
              {"out", c.out},
              {"format", c.format},
              {"reps", c.reps},
              {"m", c.m},
              {"n", c.n},
              {"score", c.score},
              {"key", c.key},
              {"synth_count", c.synth_count},
              {"width", c.width},
              {"height", c.height},
              {"outlier_fraction", c.outlier_fraction}};
}

RunConfig ConfigFromJson(const json& j) {
  RunConfig c;
  c.subcommand = j.at("subcommand").get<std::string>();
  c.input = InputFromJson(j.at("input"));
  c.input_b = InputFromJson(j.at("input_b"));
  c.calibration = InputFromJson(j.at("calibration"));
  c.truth = j.at("truth").get<std::string>();
  c.model = j.at("model").get<std::string>();
  c.template_mode = j.at("template").get<std::string>();
  c.template_index = j.at("template_index").get<std::size_t>();
  c.dim = j.at("dim").get<int>();
  c.pca = j.at("pca").get<std::string>();
  c.eps_start = j.at("eps_start").get<double>();
  c.eps_end = j.at("eps_end").get<double>();
  c.eps_stages = j.at("eps_stages").get<int>();
  c.ref_kind = j.at("ref_kind").get<std::string>();
  c.ref_size = j.at("ref_size").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.out = j.at("out").get<std::string>();
  c.format = j.at("format").get<std::string>();
  c.reps = j.at("reps").get<int>();
  c.m = j.at("m").get<std::size_t>();
  c.n = j.at("n").get<std::size_t>();
  c.score = j.at("score").get<std::string>();
  c.key = j.at("key").get<std::string>();
  c.synth_count = j.at("synth_count").get<std::size_t>();
  c.width = j.at("width").get<int>();
  c.height = j.at("height").get<int>();
  c.outlier_fraction = j.at("outlier_fraction").get<double>();
  return c;
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw LibraryError("cannot write " + path.string());
}

// Shortest round-trip decimal.
std::string Num(double v) {
  std::array<char, 32> buf;
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

// RAII wrappers over the opaque handles.
struct ImagesDeleter {
  void operator()(ltd_images* p) const { ltd_images_destroy(p); }
};
struct PipelineDeleter {
  void operator()(ltd_pipeline* p) const { ltd_pipeline_destroy(p); }
};
struct OutlierDeleter {
  void operator()(ltd_outlier_model* p) const { ltd_outlier_destroy(p); }
};
using Images = std::unique_ptr<ltd_images, ImagesDeleter>;
using PipelinePtr = std::unique_ptr<ltd_pipeline, PipelineDeleter>;
using OutlierPtr = std::unique_ptr<ltd_outlier_model, OutlierDeleter>;

Images NewImages() {
  ltd_images* p = nullptr;
  Check(ltd_images_create(&p));
  return Images(p);
}

bool IsIdxPath(const std::string& path) {
  const std::string name = fs::path(path).filename().string();
  return name.ends_with(".gz") || name.ends_with(".idx") ||
         name.find("-ubyte") != std::string::npos;
}

std::vector<int> LoadLabels(const std::string& path) {
  std::size_t count = 0;
  Check(ltd_labels_load_idx(path.c_str(), nullptr, 0, &count));
  std::vector<int> labels(count);
  Check(ltd_labels_load_idx(path.c_str(), labels.data(), labels.size(), &count));
  return labels;
}

Images LoadInput(const InputSpec& spec, const char* what) {
  if (spec.paths.empty()) throw UsageError(std::string("no ") + what + " given");
  Images all = NewImages();
  for (const std::string& path : spec.paths) {
    if (!fs::exists(path)) throw UsageError(std::string(what) + " not found: " + path);
    if (fs::is_directory(path)) {
      std::vector<std::string> files;
      for (const auto& e : fs::directory_iterator(path)) {
        const std::string ext = e.path().extension().string();
        if (e.is_regular_file() && (ext == ".pgm" || ext == ".csv")) {
          files.push_back(e.path().string());
        }
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) Check(ltd_images_append_file(all.get(), f.c_str()));
    } else if (IsIdxPath(path)) {
      ltd_images* loaded = nullptr;
      Check(ltd_images_load_idx(path.c_str(), 0, &loaded));
      Images owned(loaded);
      for (std::size_t i = 0; i < ltd_images_count(loaded); ++i) {
        Check(ltd_images_append_from(all.get(), loaded, i));
      }
    } else {
      Check(ltd_images_append_file(all.get(), path.c_str()));
    }
  }
  std::vector<int> labels;
  if (!spec.labels.empty()) {
    labels = LoadLabels(spec.labels);
    if (labels.size() != ltd_images_count(all.get())) {
      throw UsageError("label count does not match image count");
    }
  } else if (spec.digit >= 0) {
    throw UsageError("--digit needs --labels");
  }
  if (spec.digit < 0 && spec.count == 0) return all;
  Images kept = NewImages();
  for (std::size_t i = 0; i < ltd_images_count(all.get()); ++i) {
    if (spec.count > 0 && ltd_images_count(kept.get()) == spec.count) break;
    if (spec.digit >= 0 && labels[i] != spec.digit) continue;
    Check(ltd_images_append_from(kept.get(), all.get(), i));
  }
  if (spec.count > 0 && ltd_images_count(kept.get()) < spec.count) {
    throw UsageError(std::string("only ") + std::to_string(ltd_images_count(kept.get())) +
                     " " + what + " images match the selection");
  }
  return kept;
}

PipelinePtr LoadModel(const RunConfig& c) {
  if (c.model.empty()) throw UsageError("--model is required");
  if (!fs::exists(c.model)) throw UsageError("model container not found: " + c.model);
  ltd_pipeline* p = nullptr;
  Check(ltd_pipeline_load(c.model.c_str(), &p));
  return PipelinePtr(p);
}

fs::path OutDir(const RunConfig& c) {
  fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void SaveConfig(const RunConfig& c) {
  WriteText(OutDir(c) / "run_config.json", ToJson(c).dump(2) + "\n");
}

ltd_pipeline_options ToOptions(const RunConfig& c) {
  ltd_pipeline_options o;
  ltd_pipeline_options_default(&o);
  if (c.template_mode == "argmin_to_mean") {
    o.template_origin = LTD_TEMPLATE_ARGMIN_TO_MEAN;
  } else if (c.template_mode == "pixelwise_mean") {
    o.template_origin = LTD_TEMPLATE_PIXELWISE_MEAN;
  } else if (c.template_mode == "index") {
    o.template_origin = LTD_TEMPLATE_EXPLICIT_INDEX;
  } else {
    throw UsageError("unknown template mode " + c.template_mode);
  }
  o.template_index = c.template_index;
  o.dim = c.dim;
  o.pca_convention = c.pca == "paper_scaled" ? LTD_PCA_PAPER_SCALED : LTD_PCA_ORTHONORMAL;
  o.reference_kind = c.ref_kind == "gauss" ? LTD_REFERENCE_GAUSS : LTD_REFERENCE_SPHERE;
  o.reference_size = c.ref_size;
  o.eps_start = c.eps_start;
  o.eps_end = c.eps_end;
  o.eps_stages = c.eps_stages;
  o.seed = c.seed;
  return o;
}

int RunSynth(const RunConfig& c) {
  std::vector<int> labels(c.synth_count);
  ltd_images* raw = nullptr;
  Check(ltd_images_synth_dataset(c.synth_count, c.width, c.height, c.outlier_fraction,
                                 c.seed, &raw, labels.data(), labels.size()));
  Images images(raw);
  const fs::path dir = OutDir(c);
  Check(ltd_images_write_idx(images.get(), (dir / "images-idx3-ubyte").string().c_str()));
  Check(ltd_labels_write_idx(labels.data(), labels.size(),
                             (dir / "labels-idx1-ubyte").string().c_str()));
  SaveConfig(c);
  std::cout << "wrote " << c.synth_count << " images\n";
  return 0;
}

int RunEmbed(const RunConfig& c) {
  Images images = LoadInput(c.input, "input");
  const ltd_pipeline_options o = ToOptions(c);
  ltd_pipeline* raw = nullptr;
  Check(ltd_pipeline_fit(images.get(), &o, &raw));
  PipelinePtr pipeline(raw);
  const fs::path dir = OutDir(c);
  Check(ltd_pipeline_save(pipeline.get(), (dir / "model.json").string().c_str()));
  std::vector<double> ratios(static_cast<std::size_t>(c.dim));
  Check(ltd_pipeline_explained_variance(pipeline.get(), ratios.data(), ratios.size()));
  std::string csv = "component,explained_variance_ratio\n";
  double total = 0.0;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    csv += std::to_string(k + 1) + "," + Num(ratios[k]) + "\n";
    total += ratios[k];
    std::cout << "component " << k + 1 << ": " << Num(ratios[k]) << "\n";
  }
  std::cout << "total explained variance: " << Num(total) << "\n";
  WriteText(dir / "explained_variance.csv", csv);
  SaveConfig(c);
  return 0;
}

int RunDepth(const RunConfig& c) {
  PipelinePtr pipeline = LoadModel(c);
  Images images;
  if (!c.input.paths.empty()) images = LoadInput(c.input, "input");
  const bool as_json = c.format == "json";
  const fs::path path = OutDir(c) / (as_json ? "depths.json" : "depths.csv");
  Check(ltd_pipeline_write_depth_report(pipeline.get(), images.get(),
                                        as_json ? LTD_FORMAT_JSON : LTD_FORMAT_CSV,
                                        path.string().c_str()));
  SaveConfig(c);
  return 0;
}

std::vector<ltd_depth_record> DepthsOf(const ltd_pipeline* p, const ltd_images* images,
                                       std::size_t count) {
  std::vector<ltd_depth_record> records(count);
  Check(ltd_pipeline_depths(p, images, records.data(), records.size()));
  return records;
}

int RunSummary(const RunConfig& c) {
  PipelinePtr pipeline = LoadModel(c);
  ltd_images* raw = nullptr;
  Check(ltd_pipeline_training_images(pipeline.get(), &raw));
  Images training(raw);
  const std::size_t n = ltd_images_count(training.get());
  const auto records = DepthsOf(pipeline.get(), nullptr, n);
  if (c.key != "inner" && c.key != "outer") throw UsageError("unknown key " + c.key);
  std::vector<double> depth(n);
  for (std::size_t i = 0; i < n; ++i) {
    depth[i] = c.key == "inner" ? records[i].inner : records[i].outer;
  }
  std::vector<std::size_t> order(n);
  Check(ltd_order_statistics(depth.data(), n, order.data()));
  std::size_t positions[5];
  Check(ltd_five_summary_positions(n, positions));
  const fs::path dir = OutDir(c);
  std::string csv = "rank,position,id,inner,outer\n";
  for (int k = 0; k < 5; ++k) {
    const std::size_t id = order[positions[k] - 1];
    const std::string name = "summary_" + std::to_string(k + 1) + ".pgm";
    Check(ltd_images_write_pgm(training.get(), id, (dir / name).string().c_str()));
    csv += std::to_string(k + 1) + "," + std::to_string(positions[k]) + "," +
           std::to_string(id) + "," + Num(records[id].inner) + "," +
           Num(records[id].outer) + "\n";
    std::cout << "position " << positions[k] << ": image " << id << " ("
              << c.key << " depth " << Num(depth[id]) << ")\n";
  }
  WriteText(dir / "summary.csv", csv);
  SaveConfig(c);
  return 0;
}

int RunQuantile(const RunConfig& c) {
  PipelinePtr pipeline = LoadModel(c);
  ltd_pipeline_info info;
  Check(ltd_pipeline_info_get(pipeline.get(), &info));
  const std::size_t d = static_cast<std::size_t>(info.dim);
  if (d < 2) throw UsageError("quantile curves need dim >= 2");
  constexpr int kAngles = 8;
  const double radii[] = {0.25, 0.5, 0.75};
  const fs::path dir = OutDir(c);
  Images rendered = NewImages();

  std::string csv = "radius,angle_index";
  for (std::size_t k = 0; k < d; ++k) csv += ",u_" + std::to_string(k + 1);
  for (std::size_t k = 0; k < d; ++k) csv += ",x_" + std::to_string(k + 1);
  csv += ",hard_index,image\n";
  std::vector<double> u(d, 0.0), x(d), x_hard(d);
  auto emit = [&](double radius, int angle, const std::string& name) {
    std::size_t hard = 0;
    Check(ltd_pipeline_quantile(pipeline.get(), u.data(), LTD_RANK_HARD,
                                x_hard.data(), &hard));
    Check(ltd_pipeline_quantile(pipeline.get(), u.data(), LTD_RANK_ENTROPIC, x.data(),
                                nullptr));
    Check(ltd_pipeline_latent_to_image(pipeline.get(), x.data(), rendered.get()));
    Check(ltd_images_write_pgm(rendered.get(), ltd_images_count(rendered.get()) - 1,
                               (dir / name).string().c_str()));
    csv += Num(radius) + "," + std::to_string(angle);
    for (double v : u) csv += "," + Num(v);
    for (double v : x) csv += "," + Num(v);
    csv += "," + std::to_string(hard) + "," + name + "\n";
  };
  emit(0.0, 0, "quantile_center.pgm");
  for (int r = 0; r < 3; ++r) {
    for (int a = 0; a < kAngles; ++a) {
      const double theta = 2.0 * std::numbers::pi * a / kAngles;
      std::fill(u.begin(), u.end(), 0.0);
      u[0] = radii[r] * std::cos(theta);
      u[1] = radii[r] * std::sin(theta);
      emit(radii[r], a,
           "quantile_r" + std::to_string(r + 1) + "_a" + std::to_string(a) + ".pgm");
    }
  }
  WriteText(dir / "quantiles.csv", csv);
  SaveConfig(c);
  return 0;
}

int RunTest(const RunConfig& c) {
  Images a = LoadInput(c.input, "input");
  Images b = LoadInput(c.input_b, "input-b");
  ltd_test_result result;
  Check(ltd_two_sample_test(a.get(), b.get(), c.dim, c.alpha, c.seed, &result));
  const fs::path dir = OutDir(c);
  Check(ltd_test_result_write_json(&result, (dir / "test.json").string().c_str()));
  std::cout << "T = " << Num(result.statistic) << ", critical value "
            << Num(result.critical_value) << ", reject = "
            << (result.reject ? "true" : "false") << "\n";
  if (c.reps > 0) {
    const bool same = ToJson(c.input) == ToJson(c.input_b);
    const std::size_t na = ltd_images_count(a.get());
    const std::size_t nb = ltd_images_count(b.get());
    const std::size_t m = c.m > 0 ? c.m : (same ? na / 2 : na / 2);
    const std::size_t n = c.n > 0 ? c.n : (same ? na / 2 : nb / 2);
    double rate = 0.0;
    Check(ltd_rejection_rate_images(a.get(), same ? a.get() : b.get(), m, n, c.dim,
                                    c.alpha, c.reps, c.seed, &rate));
    WriteText(dir / "rejection_rate.csv",
              "pair,m,n,d,alpha,rate\n" + std::string(same ? "A-A" : "A-B") + "," +
                  std::to_string(m) + "," + std::to_string(n) + "," +
                  std::to_string(c.dim) + "," + Num(c.alpha) + "," + Num(rate) + "\n");
    std::cout << "rejection rate over " << c.reps << " repetitions: " << Num(rate)
              << "\n";
  }
  SaveConfig(c);
  return 0;
}

int RunOutlier(const RunConfig& c) {
  PipelinePtr pipeline = LoadModel(c);
  Images calibration = LoadInput(c.calibration, "calibration");
  Images test = LoadInput(c.input, "input");
  ltd_outlier_model* raw = nullptr;
  Check(ltd_outlier_calibrate(pipeline.get(), calibration.get(), c.alpha, &raw));
  OutlierPtr model(raw);
  double inner_t = 0.0, outer_t = 0.0;
  int fallback = 0;
  Check(ltd_outlier_thresholds(model.get(), &inner_t, &outer_t, &fallback));
  if (fallback != 0) {
    std::cerr << "warning: n * alpha < 1, thresholds set to the minimum calibration "
                 "depths\n";
  }
  const std::size_t n = ltd_images_count(test.get());
  std::vector<int> truth;
  if (!c.truth.empty()) {
    truth = LoadLabels(c.truth);
    if (truth.size() != n) throw UsageError("truth label count does not match input");
  }
  const fs::path dir = OutDir(c);
  Check(ltd_outlier_write_ddplot(pipeline.get(), model.get(), test.get(),
                                 truth.empty() ? nullptr : truth.data(),
                                 (dir / "ddplot.csv").string().c_str()));
  std::vector<ltd_verdict> verdicts(n);
  Check(ltd_outlier_classify(pipeline.get(), model.get(), test.get(), verdicts.data(),
                             n));
  std::string csv = "id,is_outlier,inner,outer\n";
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < n; ++i) {
    flagged += verdicts[i].is_outlier != 0 ? 1 : 0;
    csv += std::to_string(i) + "," + std::to_string(verdicts[i].is_outlier) + "," +
           Num(verdicts[i].inner) + "," + Num(verdicts[i].outer) + "\n";
  }
  WriteText(dir / "verdicts.csv", csv);
  json report{{"alpha", c.alpha},
              {"inner_threshold", inner_t},
              {"outer_threshold", outer_t},
              {"fallback", fallback != 0},
              {"count", n},
              {"flagged", flagged}};
  std::cout << "flagged " << flagged << " of " << n << " images\n";
  if (!truth.empty()) {
    int kind = LTD_SCORE_MIN_QUANTILE;
    if (c.score == "inner") {
      kind = LTD_SCORE_INNER;
    } else if (c.score == "outer") {
      kind = LTD_SCORE_OUTER;
    } else if (c.score != "min_quantile") {
      throw UsageError("unknown score " + c.score);
    }
    double auc = 0.0;
    Check(ltd_outlier_roc(pipeline.get(), model.get(), test.get(), truth.data(), kind,
                          (dir / "roc.csv").string().c_str(), &auc));
    std::size_t fp = 0, negatives = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (truth[i] == 0) {
        ++negatives;
        fp += verdicts[i].is_outlier != 0 ? 1 : 0;
      }
    }
    report["score"] = c.score;
    report["auc"] = auc;
    report["false_positive_rate"] =
        negatives > 0 ? static_cast<double>(fp) / static_cast<double>(negatives) : 0.0;
    std::cout << "AUC (" << c.score << "): " << Num(auc) << "\n";
  }
  WriteText(dir / "outlier.json", report.dump(1) + "\n");
  SaveConfig(c);
  return 0;
}

void AddInput(CLI::App* cmd, InputSpec& spec, const std::string& prefix,
              const std::string& what) {
  // The primary input uses the bare selection flags.
  const std::string sel = prefix == "input" ? "--" : "--" + prefix + "-";
  cmd->add_option("--" + prefix, spec.paths,
                  what + ": IDX files, PGM/CSV files or directories of PGM/CSV files");
  cmd->add_option(sel + "labels", spec.labels, "IDX label file matching " + what);
  cmd->add_option(sel + "digit", spec.digit, "keep images with this label");
  cmd->add_option(sel + "count", spec.count, "keep the first N selected images");
}

}  // namespace

int main(int argc, char** argv) {
  // --config is read before the real parse so that explicit flags override
  // the stored values.
  RunConfig c;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        c = ConfigFromJson(json::parse(ReadText(argv[i + 1])));
      } catch (const std::exception& e) {
        std::cerr << "error: bad config " << argv[i + 1] << ": " << e.what() << "\n";
        return kExitUsage;
      }
    }
  }

  CLI::App app{"Monge-Kantorovich depths, quantiles and tests for images"};
  app.set_version_flag("--version", std::string(ltd_version()));
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "run_config.json from an earlier run");

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", c.seed, "run seed");
    cmd->add_option("--out", c.out, "output directory");
  };
  auto fit_flags = [&](CLI::App* cmd) {
    cmd->add_option("--dim", c.dim, "latent dimension d");
    cmd->add_option("--template", c.template_mode, "template choice")
        ->check(CLI::IsMember({"argmin_to_mean", "pixelwise_mean", "index"}));
    cmd->add_option("--template-index", c.template_index, "template for --template index");
    cmd->add_option("--pca", c.pca, "PCA convention")
        ->check(CLI::IsMember({"orthonormal", "paper_scaled"}));
    cmd->add_option("--ref-kind", c.ref_kind, "reference distribution")
        ->check(CLI::IsMember({"sphere", "gauss"}));
    cmd->add_option("--ref-size", c.ref_size, "reference sample size (0: n)");
    cmd->add_option("--eps-start", c.eps_start, "first epsilon, relative to the cost scale");
    cmd->add_option("--eps-end", c.eps_end, "last epsilon, relative to the cost scale");
    cmd->add_option("--eps-stages", c.eps_stages, "number of schedule stages");
  };

  CLI::App* synth = app.add_subcommand("synth", "write a seeded blob corpus as IDX files");
  common(synth);
  synth->add_option("--count", c.synth_count, "number of images");
  synth->add_option("--width", c.width, "grid width");
  synth->add_option("--height", c.height, "grid height");
  synth->add_option("--outlier-fraction", c.outlier_fraction, "planted outlier share");

  CLI::App* embed = app.add_subcommand("embed", "fit the pipeline and write model.json");
  common(embed);
  fit_flags(embed);
  AddInput(embed, c.input, "input", "training images");

  CLI::App* depth = app.add_subcommand("depth", "inner and outer depths");
  common(depth);
  depth->add_option("--model", c.model, "model container");
  depth->add_option("--format", c.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}));
  AddInput(depth, c.input, "input", "images to score (default: training set)");

  CLI::App* summary = app.add_subcommand("summary", "five-image depth summary");
  common(summary);
  summary->add_option("--model", c.model, "model container");
  summary->add_option("--key", c.key, "depth used for ordering")
      ->check(CLI::IsMember({"inner", "outer"}));

  CLI::App* quantile = app.add_subcommand("quantile", "quantile curves and images");
  common(quantile);
  quantile->add_option("--model", c.model, "model container");

  CLI::App* test = app.add_subcommand("test", "two-sample rank test");
  common(test);
  test->add_option("--dim", c.dim, "latent dimension d");
  test->add_option("--alpha", c.alpha, "test level");
  test->add_option("--reps", c.reps, "rejection-rate repetitions (0: skip)");
  test->add_option("--m", c.m, "first sample size per repetition");
  test->add_option("--n", c.n, "second sample size per repetition");
  AddInput(test, c.input, "input", "first sample");
  AddInput(test, c.input_b, "input-b", "second sample");

  CLI::App* outlier = app.add_subcommand("outlier", "calibrated outlier detection");
  common(outlier);
  outlier->add_option("--model", c.model, "model container");
  outlier->add_option("--alpha", c.alpha, "calibration level");
  outlier->add_option("--truth", c.truth, "IDX labels of the input, nonzero = outlier");
  outlier->add_option("--score", c.score, "ROC score")
      ->check(CLI::IsMember({"inner", "outer", "min_quantile"}));
  AddInput(outlier, c.input, "input", "images to classify");
  AddInput(outlier, c.calibration, "calibration", "calibration images");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      c.subcommand = "synth";
      return RunSynth(c);
    }
    if (embed->parsed()) {
      c.subcommand = "embed";
      return RunEmbed(c);
    }
    if (depth->parsed()) {
      c.subcommand = "depth";
      return RunDepth(c);
    }
    if (summary->parsed()) {
      c.subcommand = "summary";
      return RunSummary(c);
    }
    if (quantile->parsed()) {
      c.subcommand = "quantile";
      return RunQuantile(c);
    }
    if (test->parsed()) {
      c.subcommand = "test";
      return RunTest(c);
    }
    if (outlier->parsed()) {
      c.subcommand = "outlier";
      return RunOutlier(c);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
