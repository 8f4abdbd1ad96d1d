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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ngat/sampler.hpp"
#include "ngat/types.hpp"

namespace ngat {

enum class Aggregator : std::uint8_t {
  kNgat = 0,           // neighbor-aware ReLU-cosine attention
  kNgatNonlinear = 1,  // kNgat over ReLU(W e) features
  kLightGatMlp = 2,    // softmax(LeakyReLU(a^T [W e_dst || W e_src]))
  kLightGatDp = 3,     // softmax(e_dst^T e_src / sqrt(d))
  kLightGcnMean = 4,   // symmetric degree normalization, no attention
};

std::string to_string(Aggregator a);
Aggregator parse_aggregator(const std::string& name);
inline constexpr Aggregator kAllAggregators[] = {Aggregator::kNgat, Aggregator::kNgatNonlinear,
                                                 Aggregator::kLightGatMlp, Aggregator::kLightGatDp,
                                                 Aggregator::kLightGcnMean};

struct ModelConfig {
  std::size_t embedding_dim = 64;
  std::size_t num_layers = 2;  // 0 degenerates to matrix factorization
  Aggregator aggregator = Aggregator::kNgat;
  double epsilon = 1e-12;
  // Drop the j == i term from the neighbor-aware average. Off by default.
  bool exclude_self_pairs = false;

  void validate() const;
  bool has_ablation_params() const {
    return aggregator == Aggregator::kNgatNonlinear || aggregator == Aggregator::kLightGatMlp;
  }
};

inline constexpr double kLeakyReluSlope = 0.2;

/// A trainable tensor plus its Adam moment buffers.
template <typename Scalar>
struct Parameter {
  Matrix<Scalar> value;
  Matrix<Scalar> m;
  Matrix<Scalar> v;

  Parameter() = default;
  explicit Parameter(Matrix<Scalar> init)
      : value(std::move(init)),
        m(Matrix<Scalar>::Zero(value.rows(), value.cols())),
        v(Matrix<Scalar>::Zero(value.rows(), value.cols())) {}

  template <typename T>
  Parameter<T> cast() const {
    Parameter<T> p;
    p.value = value.template cast<T>();
    p.m = m.template cast<T>();
    p.v = v.template cast<T>();
    return p;
  }
};

/// Layer-0 embeddings: one row per user and per item.
template <typename Scalar>
struct EmbeddingTable {
  Parameter<Scalar> users;
  Parameter<Scalar> items;
  std::int64_t step = 0;

  std::size_t num_users() const { return static_cast<std::size_t>(users.value.rows()); }
  std::size_t num_items() const { return static_cast<std::size_t>(items.value.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(users.value.cols()); }
};

/// Extra per-layer parameters of the ablation variants, two blocks per layer:
///   lightgat_mlp:   [W (d x d), a (1 x 2d)]
///   ngat_nonlinear: [W_user (d x d), W_item (d x d)]
template <typename Scalar>
struct AblationParams {
  std::vector<Parameter<Scalar>> blocks;

  const Matrix<Scalar>& first(std::size_t layer) const { return blocks[2 * layer].value; }
  const Matrix<Scalar>& second(std::size_t layer) const { return blocks[2 * layer + 1].value; }
};

template <typename Scalar>
struct Model {
  ModelConfig config;
  EmbeddingTable<Scalar> table;
  AblationParams<Scalar> extra;

  template <typename T>
  Model<T> cast() const {
    Model<T> out;
    out.config = config;
    out.table.users = table.users.template cast<T>();
    out.table.items = table.items.template cast<T>();
    out.table.step = table.step;
    for (const auto& b : extra.blocks) out.extra.blocks.push_back(b.template cast<T>());
    return out;
  }
};

/// Xavier/Glorot uniform with fan_in = fan_out = d, i.e. U(-sqrt(3/d), sqrt(3/d)).
template <typename Scalar>
EmbeddingTable<Scalar> init_embeddings(std::size_t num_users, std::size_t num_items, std::size_t dim,
                                       std::uint64_t rng_seed);

/// Embeddings plus any variant parameters, all Xavier-initialized.
template <typename Scalar>
Model<Scalar> init_model(std::size_t num_users, std::size_t num_items, const ModelConfig& config,
                         std::uint64_t rng_seed);

/// ReLU of the epsilon-guarded cosine, clamped to [0, 1].
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar pairwise_attention(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                             double epsilon = 1e-12) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar eps = static_cast<Scalar>(epsilon);
  const Scalar denom = std::max(a.norm(), eps) * std::max(b.norm(), eps);
  return std::clamp(a.dot(b) / denom, Scalar(0), Scalar(1));
}

/// Neighbor-aware coefficients of one node: for every neighbor i,
/// alpha_i = (1/n) sum_j f(e_i, e_j) over the same neighbor list.
/// The self pair contributes exactly 1 unless excluded.
template <typename Scalar>
Vector<Scalar> attention_coefficients(const Matrix<Scalar>& features, std::span<const NodeId> neighbors,
                                      double epsilon = 1e-12, bool exclude_self_pairs = false);

/// Everything the backward pass needs from one forward pass.
template <typename Scalar>
struct LayerActivations {
  std::vector<Matrix<Scalar>> users;  // e^(0..K)
  std::vector<Matrix<Scalar>> items;
  // alpha^(k-1) per layer, aligned with that layer's adjacency index arrays.
  std::vector<std::vector<Scalar>> user_alpha;  // item -> user coefficients
  std::vector<std::vector<Scalar>> item_alpha;  // user -> item coefficients
  // ngat_nonlinear only: pre-activations e^(k-1) W^T per layer.
  std::vector<Matrix<Scalar>> user_preact;
  std::vector<Matrix<Scalar>> item_preact;
  Matrix<Scalar> final_users;
  Matrix<Scalar> final_items;
};

/// Full propagation of every node through `layers` (one adjacency per layer).
template <typename Scalar>
LayerActivations<Scalar> forward(const Model<Scalar>& model, const LayerGraphs& layers);

/// Unweighted sum of the per-layer embeddings.
template <typename Scalar>
Matrix<Scalar> combine_layers(std::span<const Matrix<Scalar>> per_layer) {
  Matrix<Scalar> out = per_layer.front();
  for (std::size_t k = 1; k < per_layer.size(); ++k) out += per_layer[k];
  return out;
}

template <typename Scalar>
Scalar predict(NodeId user, NodeId item, const Matrix<Scalar>& final_users, const Matrix<Scalar>& final_items) {
  return final_users.row(user).dot(final_items.row(item));
}

template <typename Scalar>
struct Gradients {
  Matrix<Scalar> users;
  Matrix<Scalar> items;
  std::vector<Matrix<Scalar>> blocks;

  static Gradients zeros_like(const Model<Scalar>& model);
};

struct BackwardOptions {
  // When false the coefficients are treated as constants; only useful to
  // isolate the attention path in tests.
  bool through_attention = true;
};

/// Reverse-mode pass: given dL/de* for every node, returns dL/dTheta.
template <typename Scalar>
Gradients<Scalar> backward(const Model<Scalar>& model, const LayerGraphs& layers, const LayerActivations<Scalar>& acts,
                           const Matrix<Scalar>& d_final_users, const Matrix<Scalar>& d_final_items,
                           BackwardOptions options = {});

}  // namespace ngat
