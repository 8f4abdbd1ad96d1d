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

#include "ngat/synthetic.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace ngat {
namespace {

TEST(Planted, CompleteBlocksWhenCertain) {
  PlantedBlocksSpec spec{3, 4, 5, 1.0, 0.0, 1};
  auto edges = generate_planted(spec);
  EXPECT_EQ(edges.size(), 3u * 4 * 5);
  for (const auto& e : edges) EXPECT_EQ(spec.user_block(e.user), spec.item_block(e.item));
}

TEST(Planted, DefaultEdgeCountWithinThreeSigma) {
  PlantedBlocksSpec spec;
  EXPECT_DOUBLE_EQ(spec.expected_edges(), 24800.0);
  for (std::uint64_t seed : {0, 1, 2}) {
    spec.rng_seed = seed;
    const double n = static_cast<double>(generate_planted(spec).size());
    EXPECT_LT(std::abs(n - 24800.0), 3 * std::sqrt(spec.edge_count_variance()));
  }
}

TEST(Planted, DeterministicAndSeedSensitive) {
  PlantedBlocksSpec spec;
  spec.users_per_block = 30;
  auto a = generate_planted(spec);
  EXPECT_EQ(a, generate_planted(spec));
  spec.rng_seed = 1;
  EXPECT_NE(a, generate_planted(spec));
}

TEST(Planted, RejectsBadSpecs) {
  EXPECT_THROW((PlantedBlocksSpec{0}).validate(), std::invalid_argument);
  EXPECT_THROW((PlantedBlocksSpec{2, 10, 10, 1.5}).validate(), std::invalid_argument);
  EXPECT_THROW((PlantedBlocksSpec{2, 10, 10, 0.3, -0.1}).validate(), std::invalid_argument);
}

TEST(Reference, ZeroLayersIsIdentity) {
  std::mt19937_64 rng(1);
  auto g = testing::random_graph(rng, 4, 5, 0.5);
  auto m = init_model<double>(4, 5, ModelConfig{3, 0}, 2);
  auto ref = dense_reference_forward(g, m);
  for (std::size_t u = 0; u < 4; ++u) {
    for (std::size_t c = 0; c < 3; ++c) {
      EXPECT_EQ(ref.final_users[u][c], m.table.users.value(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(c)));
    }
  }
}

TEST(Reference, SymmetricInstance) {
  // Complete 3 x 3 graph with identical embeddings: every alpha is 1 and
  // each layer multiplies by sqrt(3).
  auto g = make_graph(3, 3, {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
  auto m = init_model<double>(3, 3, ModelConfig{2, 2}, 1);
  m.table.users.value.setConstant(0.5);
  m.table.items.value.setConstant(0.5);
  auto ref = dense_reference_forward(g, m);
  for (double a : ref.user_alpha[0]) EXPECT_NEAR(a, 1.0, 1e-15);
  EXPECT_NEAR(ref.users[1][0][0], std::sqrt(3.0) * 0.5, 1e-15);
  EXPECT_NEAR(ref.final_users[2][1], 0.5 * (1 + std::sqrt(3.0) + 3.0), 1e-14);
}

TEST(Reference, PermutationEquivariant) {
  std::mt19937_64 rng(3);
  auto g = testing::random_graph(rng, 5, 4, 0.5);
  auto m = init_model<double>(5, 4, ModelConfig{3, 2}, 4);
  std::vector<NodeId> perm = {3, 0, 4, 1, 2};  // old user u becomes perm[u]
  std::vector<std::vector<NodeId>> lists(5);
  Model<double> pm = m;
  for (NodeId u = 0; u < 5; ++u) {
    auto nb = g.train.user_items.neighbors(u);
    lists[perm[u]].assign(nb.begin(), nb.end());
    pm.table.users.value.row(perm[u]) = m.table.users.value.row(u);
  }
  auto pg = make_graph(5, 4, lists);
  auto a = dense_reference_forward(g, m);
  auto b = dense_reference_forward(pg, pm);
  for (NodeId u = 0; u < 5; ++u) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(a.final_users[u][c], b.final_users[perm[u]][c], 1e-14);
  }
  for (NodeId i = 0; i < 4; ++i) {
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(a.final_items[i][c], b.final_items[i][c], 1e-14);
  }
}

TEST(Reference, RefusesLargeGraphs) {
  std::vector<std::vector<NodeId>> lists(40);
  for (auto& l : lists) {
    for (NodeId i = 0; i < 30; ++i) l.push_back(i);
  }
  auto g = make_graph(40, 30, lists);
  auto m = init_model<double>(40, 30, ModelConfig{2, 1}, 1);
  EXPECT_THROW(dense_reference_forward(g, m), std::invalid_argument);
}

}  // namespace
}  // namespace ngat
