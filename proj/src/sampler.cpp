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

#include "ngat/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ngat/rng.hpp"

namespace ngat {

void SamplerConfig::validate(std::size_t num_layers) const {
  if (max_neighbors_per_hop.size() != num_layers) {
    throw std::invalid_argument("max_neighbors_per_hop needs " + std::to_string(num_layers) + " entries, got " +
                                std::to_string(max_neighbors_per_hop.size()));
  }
  for (std::size_t m : max_neighbors_per_hop) {
    if (m < 1) throw std::invalid_argument("max_neighbors_per_hop entries must be >= 1");
  }
}

namespace {

Adjacency cap_side(const Adjacency& full, std::size_t cap, std::uint64_t seed, std::uint64_t epoch, Side side,
                   std::size_t hop) {
  Adjacency out;
  out.offsets.reserve(full.num_nodes() + 1);
  std::vector<NodeId> scratch;
  for (std::size_t n = 0; n < full.num_nodes(); ++n) {
    auto nb = full.neighbors(n);
    if (nb.size() <= cap) {
      out.indices.insert(out.indices.end(), nb.begin(), nb.end());
    } else {
      // Partial Fisher-Yates: the first `cap` slots end up a uniform subset.
      scratch.assign(nb.begin(), nb.end());
      auto rng = make_stream(seed, {tag(StreamTag::kSampler), epoch, n, static_cast<std::uint64_t>(side), hop});
      for (std::size_t i = 0; i < cap; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, scratch.size() - 1);
        std::swap(scratch[i], scratch[pick(rng)]);
      }
      std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(cap));
      out.indices.insert(out.indices.end(), scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(cap));
    }
    out.offsets.push_back(out.indices.size());
  }
  return out;
}

}  // namespace

SampledSubgraph sample_subgraph(const InteractionGraph& graph, const SamplerConfig& config, std::uint64_t epoch) {
  if (graph.num_train_edges() == 0) throw GraphError("cannot sample from a graph without training edges");
  config.validate(config.max_neighbors_per_hop.size());
  SampledSubgraph sub;
  sub.hops.reserve(config.max_neighbors_per_hop.size());
  for (std::size_t h = 0; h < config.max_neighbors_per_hop.size(); ++h) {
    const std::size_t cap = config.max_neighbors_per_hop[h];
    BipartiteAdjacency hop;
    hop.user_items = cap_side(graph.train.user_items, cap, config.rng_seed, epoch, Side::kUser, h + 1);
    hop.item_users = cap_side(graph.train.item_users, cap, config.rng_seed, epoch, Side::kItem, h + 1);
    sub.hops.push_back(std::move(hop));
  }
  return sub;
}

LayerGraphs full_graph_layers(const InteractionGraph& graph, std::size_t num_layers) {
  return LayerGraphs(num_layers, std::cref(graph.train));
}

LayerGraphs sampled_layers(const SampledSubgraph& subgraph) {
  LayerGraphs layers;
  for (auto it = subgraph.hops.rbegin(); it != subgraph.hops.rend(); ++it) layers.push_back(std::cref(*it));
  return layers;
}

std::vector<std::size_t> parse_caps(const std::string& csv) {
  std::vector<std::size_t> caps;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 1) throw std::invalid_argument("bad neighbor cap '" + tok + "'");
    caps.push_back(static_cast<std::size_t>(v));
  }
  return caps;
}

}  // namespace ngat
