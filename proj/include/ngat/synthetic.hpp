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

#pragma once

#include <cstdint>
#include <vector>

#include "ngat/graph_io.hpp"
#include "ngat/model.hpp"
#include "ngat/sampler.hpp"

namespace ngat {

/// Users and items split into equal blocks; every (user, item) pair is an
/// independent Bernoulli edge with probability p_in inside a block and
/// p_cross across blocks.
struct PlantedBlocksSpec {
  std::size_t num_blocks = 2;
  std::size_t users_per_block = 200;
  std::size_t items_per_block = 200;
  double in_block_edge_prob = 0.30;
  double cross_block_edge_prob = 0.01;
  std::uint64_t rng_seed = 0;

  void validate() const;
  std::size_t num_users() const { return num_blocks * users_per_block; }
  std::size_t num_items() const { return num_blocks * items_per_block; }
  std::size_t user_block(std::size_t user) const { return user / users_per_block; }
  std::size_t item_block(std::size_t item) const { return item / items_per_block; }
  double expected_edges() const;
  double edge_count_variance() const;
};

/// Edge list with user ids in [0, num_users()) and item ids in [0, num_items()).
EdgeList generate_planted(const PlantedBlocksSpec& spec);

/// Output of the index-naive oracle, all in double.
struct ReferenceForward {
  // [layer][node][coordinate]
  std::vector<std::vector<std::vector<double>>> users;
  std::vector<std::vector<std::vector<double>>> items;
  // [layer-1][edge] aligned with each layer's adjacency
  std::vector<std::vector<double>> user_alpha;
  std::vector<std::vector<double>> item_alpha;
  std::vector<std::vector<double>> final_users;
  std::vector<std::vector<double>> final_items;
};

inline constexpr std::size_t kReferenceMaxEdges = 1000;

/// Straight-line recomputation of attention, aggregation, and layer sums
/// without Eigen or shared code paths. Refuses layer graphs with more than
/// kReferenceMaxEdges edges per side.
ReferenceForward dense_reference_forward(const LayerGraphs& layers, const Model<double>& model);
ReferenceForward dense_reference_forward(const InteractionGraph& graph, const Model<double>& model);

}  // namespace ngat
