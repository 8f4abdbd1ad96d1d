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
#include <functional>
#include <string>
#include <vector>

#include "ngat/graph_io.hpp"
#include "ngat/types.hpp"

namespace ngat {

enum class ResamplePolicy { kPerEpoch };

struct SamplerConfig {
  // Cap for hop 1, hop 2, ...; one entry per model layer.
  std::vector<std::size_t> max_neighbors_per_hop{120, 120};
  std::uint64_t rng_seed = 0;
  ResamplePolicy resample_policy = ResamplePolicy::kPerEpoch;

  void validate(std::size_t num_layers) const;
};

/// Max-M sub-graph: hops[h] caps every node of both sides at
/// max_neighbors_per_hop[h] distinct true neighbors.
struct SampledSubgraph {
  std::vector<BipartiteAdjacency> hops;
};

/// Uniform subset without replacement of min(deg, cap) neighbors for every
/// node, every hop. Each draw uses its own stream keyed on
/// (seed, epoch, node, side, hop), so the result is schedule-independent.
SampledSubgraph sample_subgraph(const InteractionGraph& graph, const SamplerConfig& config, std::uint64_t epoch);

/// Adjacency used by each aggregation layer; layers[k-1] drives layer k.
using LayerGraphs = std::vector<std::reference_wrapper<const BipartiteAdjacency>>;

/// Every layer propagates over the full training graph (evaluation).
LayerGraphs full_graph_layers(const InteractionGraph& graph, std::size_t num_layers);

/// Hop 1 is the outermost aggregation, so layer k reads hop K-k+1.
LayerGraphs sampled_layers(const SampledSubgraph& subgraph);

std::vector<std::size_t> parse_caps(const std::string& csv);

}  // namespace ngat
