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
#include <string>
#include <vector>

#include "cli_util.hpp"
#include "doctest.h"
#include "json.hpp"

using clitest::FreshDir;
using clitest::ReadCsv;
using clitest::RunCli;
using clitest::Slurp;
namespace fs = std::filesystem;

namespace {

// A synthetic corpus and a model fit on it, shared by the cases below.
struct Corpus {
  fs::path root;
  std::string images, labels, model;
};

const Corpus& SharedCorpus() {
  static const Corpus corpus = [] {
    Corpus c;
    c.root = FreshDir("corpus");
    const fs::path log = c.root / "log.txt";
    REQUIRE(RunCli({"synth", "--count", "100", "--width", "12", "--height", "12",
                    "--outlier-fraction", "0.1", "--seed", "3", "--out",
                    (c.root / "synth").string()},
                   log) == 0);
    c.images = (c.root / "synth" / "images-idx3-ubyte").string();
    c.labels = (c.root / "synth" / "labels-idx1-ubyte").string();
    REQUIRE(RunCli({"embed", "--input", c.images, "--seed", "3", "--out",
                    (c.root / "embed").string()},
                   log) == 0);
    c.model = (c.root / "embed" / "model.json").string();
    return c;
  }();
  return corpus;
}

// Runs the command twice into the same directory and compares every file.
void CheckRepeatable(const std::string& name, std::vector<std::string> args) {
  const fs::path dir = FreshDir("repeat_" + name);
  args.push_back("--out");
  args.push_back((dir / "out").string());
  REQUIRE(RunCli(args, dir / "log1.txt") == 0);
  const auto first = clitest::Snapshot(dir / "out");
  fs::remove_all(dir / "out");
  REQUIRE(RunCli(args, dir / "log2.txt") == 0);
  const auto second = clitest::Snapshot(dir / "out");
  REQUIRE(first.size() == second.size());
  CHECK(first.size() > 1);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].first == second[i].first);
    CHECK_MESSAGE(first[i].second == second[i].second, name << ": " << first[i].first);
  }
}

}  // namespace

TEST_CASE("Every subcommand is byte-for-byte repeatable") {
  const Corpus& c = SharedCorpus();
  CheckRepeatable("synth", {"synth", "--count", "30", "--width", "10", "--height", "10",
                            "--seed", "9"});
  CheckRepeatable("embed", {"embed", "--input", c.images, "--count", "40", "--seed", "1"});
  CheckRepeatable("depth", {"depth", "--model", c.model});
  CheckRepeatable("depth_json", {"depth", "--model", c.model, "--format", "json"});
  CheckRepeatable("summary", {"summary", "--model", c.model});
  CheckRepeatable("quantile", {"quantile", "--model", c.model});
  CheckRepeatable("test", {"test", "--input", c.images, "--count", "40", "--input-b",
                           c.images, "--input-b-count", "40", "--reps", "3", "--m", "20",
                           "--n", "20"});
  CheckRepeatable("outlier", {"outlier", "--model", c.model, "--input", c.images,
                              "--truth", c.labels, "--calibration", c.images,
                              "--calibration-count", "50"});
}

TEST_CASE("Summary of 100 images") {
  const Corpus& c = SharedCorpus();
  const fs::path dir = FreshDir("summary");
  REQUIRE(RunCli({"summary", "--model", c.model, "--out", dir.string()}, dir / "log") == 0);
  for (int k = 1; k <= 5; ++k) {
    CHECK(fs::exists(dir / ("summary_" + std::to_string(k) + ".pgm")));
  }
  const auto rows = ReadCsv(dir / "summary.csv");
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"rank", "position", "id", "inner", "outer"});
  const std::vector<std::string> positions = {"1", "25", "50", "75", "100"};
  for (int k = 0; k < 5; ++k) CHECK(rows[k + 1][1] == positions[k]);
  for (int k = 1; k < 5; ++k) CHECK(std::stod(rows[k][3]) >= std::stod(rows[k + 1][3]));
}

TEST_CASE("Depth report covers the training set") {
  const Corpus& c = SharedCorpus();
  const fs::path dir = FreshDir("depth");
  REQUIRE(RunCli({"depth", "--model", c.model, "--out", dir.string()}, dir / "log") == 0);
  const auto rows = ReadCsv(dir / "depths.csv");
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == std::vector<std::string>{"id", "inner", "outer", "rank_norm", "residual"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][1]) >= 0.0);
    CHECK(std::stod(rows[i][1]) <= 0.5);
    CHECK(std::stod(rows[i][2]) <= 1.0);
  }
  const auto config = nlohmann::json::parse(Slurp(dir / "run_config.json"));
  CHECK(config["subcommand"] == "depth");
}

TEST_CASE("The central hard quantile is a deep training image") {
  const Corpus& c = SharedCorpus();
  const fs::path dir = FreshDir("quantile");
  REQUIRE(RunCli({"quantile", "--model", c.model, "--out", dir.string()}, dir / "log") == 0);
  REQUIRE(RunCli({"depth", "--model", c.model, "--out", (dir / "d").string()}, dir / "log") ==
          0);
  const auto q = ReadCsv(dir / "quantiles.csv");
  REQUIRE(q.size() == 1 + 1 + 24);
  CHECK(q[1][0] == "0");
  const std::size_t center = std::stoul(q[1][q[1].size() - 2]);
  const auto d = ReadCsv(dir / "d" / "depths.csv");
  std::vector<double> inner;
  for (std::size_t i = 1; i < d.size(); ++i) inner.push_back(std::stod(d[i][1]));
  std::size_t deeper = 0;
  for (double v : inner) deeper += v > inner[center] ? 1 : 0;
  // The hard center and the deepest entropic point agree up to the
  // smoothing of the entropic ranks; allow a few neighbours.
  CHECK(deeper <= 3);
  CHECK(fs::exists(dir / "quantile_center.pgm"));
  CHECK(fs::exists(dir / "quantile_r3_a7.pgm"));
}

TEST_CASE("Two-sample test of a sample against itself") {
  const Corpus& c = SharedCorpus();
  const fs::path dir = FreshDir("test_same");
  REQUIRE(RunCli({"test", "--input", c.images, "--count", "30", "--input-b", c.images,
                  "--input-b-count", "30", "--out", dir.string()},
                 dir / "log") == 0);
  const auto j = nlohmann::json::parse(Slurp(dir / "test.json"));
  CHECK(j["statistic"] == 0.0);
  CHECK(j["reject"] == false);
  CHECK(j["dof"] == 2);
}

TEST_CASE("Full latent dimension explains all variance") {
  const fs::path dir = FreshDir("embed_full");
  REQUIRE(RunCli({"synth", "--count", "20", "--width", "3", "--height", "2", "--seed", "4",
                  "--out", (dir / "s").string()},
                 dir / "log") == 0);
  REQUIRE(RunCli({"embed", "--input", (dir / "s" / "images-idx3-ubyte").string(), "--dim",
                  "12", "--out", (dir / "e").string()},
                 dir / "log") == 0);
  const auto rows = ReadCsv(dir / "e" / "explained_variance.csv");
  REQUIRE(rows.size() == 13);
  double total = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(rows[i][1]);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Outlier detection with known truth") {
  const Corpus& c = SharedCorpus();
  const fs::path dir = FreshDir("outlier");
  REQUIRE(RunCli({"outlier", "--model", c.model, "--input", c.images, "--truth", c.labels,
                  "--calibration", c.images, "--calibration-count", "60", "--alpha", "0.1",
                  "--out", dir.string()},
                 dir / "log") == 0);
  const auto j = nlohmann::json::parse(Slurp(dir / "outlier.json"));
  CHECK(j["count"] == 100);
  CHECK(j["auc"].get<double>() > 0.5);
  const auto v = ReadCsv(dir / "verdicts.csv");
  CHECK(v.size() == 101);
  CHECK(fs::exists(dir / "roc.csv"));
  CHECK(fs::exists(dir / "ddplot.csv"));
}

TEST_CASE("Usage and runtime errors") {
  const Corpus& c = SharedCorpus();
  const fs::path dir = FreshDir("errors");
  CHECK(RunCli({"depth", "--model", (dir / "missing.json").string(), "--out",
                (dir / "a").string()},
               dir / "log") == 2);
  CHECK(Slurp(dir / "log").find("model container not found") != std::string::npos);
  CHECK(RunCli({"frobnicate"}, dir / "log") != 0);
  CHECK(RunCli({"embed", "--input", c.images, "--dim", "0", "--out", (dir / "b").string()},
               dir / "log") != 0);
  fs::create_directories(dir / "bad");
  std::ofstream(dir / "bad" / "model.json") << "{}";
  CHECK(RunCli({"depth", "--model", (dir / "bad" / "model.json").string(), "--out",
                (dir / "c").string()},
               dir / "log") == 1);
}

TEST_CASE("Run configuration round trip") {
  const Corpus& c = SharedCorpus();
  const fs::path dir = FreshDir("config");
  REQUIRE(RunCli({"embed", "--input", c.images, "--count", "30", "--dim", "3", "--seed", "17",
                  "--out", (dir / "first").string()},
                 dir / "log") == 0);
  const fs::path config = dir / "first" / "run_config.json";
  REQUIRE(fs::exists(config));
  const auto j = nlohmann::json::parse(Slurp(config));
  CHECK(j["dim"] == 3);
  CHECK(j["seed"] == 17);
  // Replaying the config elsewhere gives the same model.
  REQUIRE(RunCli({"--config", config.string(), "embed", "--out", (dir / "second").string()},
                 dir / "log") == 0);
  CHECK(Slurp(dir / "first" / "model.json") == Slurp(dir / "second" / "model.json"));
  // Explicit flags override the file.
  REQUIRE(RunCli({"--config", config.string(), "embed", "--dim", "2", "--out",
                  (dir / "third").string()},
                 dir / "log") == 0);
  const auto k = nlohmann::json::parse(Slurp(dir / "third" / "run_config.json"));
  CHECK(k["dim"] == 2);
  CHECK(k["seed"] == 17);
}
