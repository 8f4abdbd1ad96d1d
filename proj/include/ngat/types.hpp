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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ngat {

using NodeId = std::uint32_t;

// Row-major so that one row holds one node's embedding.
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

enum class Side : std::uint8_t { kUser = 0, kItem = 1 };

/// Compressed sparse row adjacency: neighbors of node n are
/// indices[offsets[n] .. offsets[n+1]).
struct Adjacency {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> indices;

  std::size_t num_nodes() const { return offsets.size() - 1; }
  std::size_t num_edges() const { return indices.size(); }

  std::span<const NodeId> neighbors(std::size_t node) const {
    return {indices.data() + offsets[node], indices.data() + offsets[node + 1]};
  }
  std::size_t degree(std::size_t node) const { return offsets[node + 1] - offsets[node]; }

  std::size_t max_degree() const;

  /// Builds from per-node lists; lists are copied verbatim.
  static Adjacency from_lists(const std::vector<std::vector<NodeId>>& lists);

  /// Transpose into a graph with `num_targets` rows; neighbor lists come out sorted.
  Adjacency transpose(std::size_t num_targets) const;

  bool operator==(const Adjacency&) const = default;
};

/// Both directions of a bipartite graph. For the full training graph
/// item_users is the exact transpose of user_items; sampled sub-graphs cap
/// each side independently so the two need not agree.
struct BipartiteAdjacency {
  Adjacency user_items;
  Adjacency item_users;

  std::size_t num_users() const { return user_items.num_nodes(); }
  std::size_t num_items() const { return item_users.num_nodes(); }
  const Adjacency& side(Side s) const { return s == Side::kUser ? user_items : item_users; }

  bool operator==(const BipartiteAdjacency&) const = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ngat
