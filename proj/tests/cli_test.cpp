// Copyright 2026 The NGAT4Rec Authors. All Rights Reserved.
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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run(const std::string& args, const fs::path& stdout_file = "/dev/null") {
  const std::string cmd = std::string(NGAT_BIN) + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
  return std::system(cmd.c_str());
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ngat_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // synth -> preprocess -> train -> eval into `out`.
  void pipeline(const fs::path& out) {
    ASSERT_EQ(run("synth --users 25 --items 25 --p-in 0.5 --seed 2 --out " + (dir_ / "pairs.txt").string()), 0);
    ASSERT_EQ(run("preprocess --input " + (dir_ / "pairs.txt").string() + " --k-core 3 --seed 2 --out " + out.string(),
                  out.string() + ".summary.json"),
              0);
    std::ofstream(dir_ / "run.cfg") << "embedding_dim = 8\nnum_layers = 2\nlearning_rate = 0.01\nbatch_size = 64\n"
                                       "max_epochs = 4\neval_every = 2\nrng_seed = 5\nmax_neighbors_per_hop = 6,6\n";
    ASSERT_EQ(run("train --graph " + (out / "graph.ngig").string() + " --config " + (dir_ / "run.cfg").string() +
                  " --out " + out.string()),
              0);
    ASSERT_EQ(run("eval --checkpoint " + (out / "checkpoint.ngat").string() + " --graph " +
                  (out / "graph.ngig").string() + " --split test --cutoffs 10,20 --report " +
                  (out / "report.json").string()),
              0);
  }

  fs::path dir_;
};

TEST_F(Cli, PipelineProducesArtifacts) {
  const fs::path out = dir_ / "a";
  pipeline(out);
  for (const char* f : {"graph.ngig", "user_ids.txt", "item_ids.txt", "checkpoint.ngat", "last.ngat", "history.jsonl",
                        "config.txt", "report.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  auto summary = nlohmann::json::parse(slurp(out.string() + ".summary.json"));
  EXPECT_EQ(summary["users"], 50);
  auto report = nlohmann::json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report["split"], "test");
  std::istringstream history(slurp(out / "history.jsonl"));
  std::string line;
  int lines = 0;
  while (std::getline(history, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("val_recall20"));
    ++lines;
  }
  EXPECT_EQ(lines, 2);

  ASSERT_EQ(run("sample-stats --graph " + (out / "graph.ngig").string() + " --max-neighbors 3,5",
                dir_ / "stats.json"),
            0);
  auto stats = nlohmann::json::parse(slurp(dir_ / "stats.json"));
  EXPECT_EQ(stats["hops"].size(), 2u);
}

TEST_F(Cli, PipelineIsByteReproducible) {
  pipeline(dir_ / "a");
  pipeline(dir_ / "b");
  for (const char* f : {"graph.ngig", "checkpoint.ngat", "last.ngat", "report.json"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
}

TEST_F(Cli, BadInputFails) {
  EXPECT_NE(run("train --graph /nonexistent --config /nonexistent --out " + dir_.string()), 0);
  std::ofstream(dir_ / "junk.ngat") << "garbage";
  std::ofstream(dir_ / "junk.ngig") << "garbage";
  EXPECT_NE(run("eval --checkpoint " + (dir_ / "junk.ngat").string() + " --graph " + (dir_ / "junk.ngig").string()),
            0);
  EXPECT_NE(run("frobnicate"), 0);
}

}  // namespace
