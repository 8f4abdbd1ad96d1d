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

#include "ngat/checkpoint.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "ngat/config.hpp"

namespace ngat {
namespace {

std::string serialize(const Model<float>& m) {
  std::ostringstream out;
  write_checkpoint(out, m);
  return out.str();
}

Model<float> deserialize(const std::string& bytes) {
  std::istringstream in(bytes);
  return read_checkpoint(in);
}

TEST(Checkpoint, RoundTripsEveryVariant) {
  for (Aggregator agg : kAllAggregators) {
    ModelConfig cfg{6, 2, agg};
    cfg.exclude_self_pairs = agg == Aggregator::kNgat;
    auto m = init_model<float>(7, 5, cfg, 3);
    auto back = deserialize(serialize(m));
    EXPECT_EQ(back.config.aggregator, agg);
    EXPECT_EQ(back.config.exclude_self_pairs, cfg.exclude_self_pairs);
    EXPECT_EQ(back.config.num_layers, 2u);
    EXPECT_EQ(back.table.users.value, m.table.users.value);
    EXPECT_EQ(back.table.items.value, m.table.items.value);
    ASSERT_EQ(back.extra.blocks.size(), m.extra.blocks.size());
    for (std::size_t b = 0; b < m.extra.blocks.size(); ++b) EXPECT_EQ(back.extra.blocks[b].value, m.extra.blocks[b].value);
    EXPECT_EQ(serialize(back), serialize(m));
  }
}

TEST(Checkpoint, HeaderLayout) {
  ModelConfig cfg{4, 3, Aggregator::kLightGatDp};
  auto bytes = serialize(init_model<float>(2, 3, cfg, 1));
  EXPECT_EQ(bytes.substr(0, 4), "NGAT");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[8], 2);
  EXPECT_EQ(bytes[12], 3);
  EXPECT_EQ(bytes[16], 4);
  EXPECT_EQ(bytes[20], 3);
  EXPECT_EQ(bytes[24], 3);
  EXPECT_EQ(bytes.size(), 25u + 4 * (2 + 3) * 4 + 4);
  cfg.exclude_self_pairs = true;
  EXPECT_EQ(variant_tag(cfg), 0x83);
}

TEST(Checkpoint, DetectsCorruption) {
  auto bytes = serialize(init_model<float>(3, 3, ModelConfig{4, 1}, 1));
  for (std::size_t pos : {std::size_t{30}, bytes.size() - 1}) {
    auto bad = bytes;
    bad[pos] ^= 0x10;
    EXPECT_THROW(deserialize(bad), CheckpointError) << pos;
  }
  EXPECT_THROW(deserialize(bytes.substr(0, bytes.size() - 5)), CheckpointError);
  EXPECT_THROW(deserialize(bytes + "x"), CheckpointError);
  EXPECT_THROW(deserialize(""), CheckpointError);
  auto magic = bytes;
  magic[0] = 'X';
  EXPECT_THROW(deserialize(magic), CheckpointError);
}

TEST(Checkpoint, MissingFile) {
  EXPECT_THROW(read_checkpoint(std::filesystem::path("/nonexistent/x.ngat")), CheckpointError);
}

TEST(RunConfig, ParsesKeysAndDefaults) {
  std::istringstream in(
      "# comment\n"
      "embedding_dim = 32\n"
      "num_layers = 3\n"
      "aggregator_variant = lightgcn_mean\n"
      "learning_rate = 0.01   # trailing\n"
      "\n"
      "rng_seed = 7\n"
      "loss_form = paper_literal\n");
  auto cfg = parse_run_config(in);
  EXPECT_EQ(cfg.model.embedding_dim, 32u);
  EXPECT_EQ(cfg.model.aggregator, Aggregator::kLightGcnMean);
  EXPECT_EQ(cfg.train.learning_rate, 0.01);
  EXPECT_EQ(cfg.train.rng_seed, 7u);
  EXPECT_EQ(cfg.sampler.rng_seed, 7u);
  EXPECT_EQ(cfg.sampler.max_neighbors_per_hop, (std::vector<std::size_t>{120, 120, 120}));
  EXPECT_EQ(cfg.train.loss_form, LossForm::kLiteral);
  EXPECT_EQ(cfg.train.batch_size, 8192u);
}

TEST(RunConfig, DumpRoundTrips) {
  std::istringstream in("max_neighbors_per_hop = 5,7\nsampler_rng_seed = 3\nexclude_self_pairs = true\n");
  auto cfg = parse_run_config(in);
  std::istringstream again(dump_run_config(cfg));
  auto back = parse_run_config(again);
  EXPECT_EQ(back.sampler.max_neighbors_per_hop, (std::vector<std::size_t>{5, 7}));
  EXPECT_EQ(back.sampler.rng_seed, 3u);
  EXPECT_TRUE(back.model.exclude_self_pairs);
  EXPECT_EQ(dump_run_config(back), dump_run_config(cfg));
}

TEST(RunConfig, RejectsBadInput) {
  for (const char* text : {"bogus = 1\n", "embedding_dim\n", "embedding_dim = abc\n", "aggregator_variant = gat\n",
                           "max_neighbors_per_hop = 5\n", "resample_policy = never\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(parse_run_config(in), std::invalid_argument) << text;
  }
}

}  // namespace
}  // namespace ngat
