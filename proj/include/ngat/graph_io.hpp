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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ngat/types.hpp"

namespace ngat {

struct Edge {
  std::uint64_t user;
  std::uint64_t item;
  auto operator<=>(const Edge&) const = default;
};

using EdgeList = std::vector<Edge>;

enum class InputFormat { kPairs, kAdjacency };

InputFormat parse_input_format(const std::string& name);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct LoadResult {
  EdgeList edges;  // sorted, deduplicated, original ids
  std::size_t num_lines = 0;
  std::size_t num_duplicates = 0;
  std::vector<std::string> warnings;
};

LoadResult load_interactions(std::istream& in, InputFormat format);
LoadResult load_interactions(const std::filesystem::path& path, InputFormat format);

/// Dense-id to original-id tables.
struct IdMap {
  std::vector<std::uint64_t> users;
  std::vector<std::uint64_t> items;
};

struct DenseEdges {
  EdgeList edges;  // dense ids, sorted
  IdMap ids;
  std::size_t num_users() const { return ids.users.size(); }
  std::size_t num_items() const { return ids.items.size(); }
};

/// Relabels users and items to contiguous ranges in ascending order of
/// their original ids.
DenseEdges densify(const EdgeList& edges);

/// Iteratively drops users and items with fewer than `k` interactions until
/// every survivor has at least `k`; survivors are re-densified.
DenseEdges apply_k_core(const EdgeList& edges, std::size_t k = 10);

struct SplitSpec {
  double train_fraction = 0.8;
  double validation_fraction_of_train = 0.1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct InteractionGraph {
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  BipartiteAdjacency train;
  Adjacency val_pos;   // user -> items
  Adjacency test_pos;  // user -> items

  std::size_t num_train_edges() const { return train.user_items.num_edges(); }
  bool operator==(const InteractionGraph&) const = default;
};

/// Builds a graph straight from per-user train lists (no held-out data);
/// handy for tests and for callers that split elsewhere.
InteractionGraph make_graph(std::size_t num_users, std::size_t num_items,
                            const std::vector<std::vector<NodeId>>& train,
                            const std::vector<std::vector<NodeId>>& val = {},
                            const std::vector<std::vector<NodeId>>& test = {});

/// Per-user random partition into train / validation / test.
///   train = max(1, floor(train_fraction * deg)), rest is test;
///   validation = floor(fraction * train), at least 1 when train >= 2,
///   carved out of train.
InteractionGraph split(const DenseEdges& edges, const SplitSpec& spec);

inline constexpr std::uint32_t kGraphSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const InteractionGraph& graph);
void write_snapshot(const std::filesystem::path& path, const InteractionGraph& graph);
InteractionGraph read_snapshot(std::istream& in);
InteractionGraph read_snapshot(const std::filesystem::path& path);

/// "dense_id original_id" per line.
void write_id_map(const std::filesystem::path& path, const std::vector<std::uint64_t>& ids);

}  // namespace ngat
