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

#include <span>
#include <string>
#include <vector>

#include "ngat/graph_io.hpp"
#include "ngat/model.hpp"

namespace ngat {

enum class EvalSplit { kValidation, kTest };

std::string to_string(EvalSplit split);
EvalSplit parse_split(const std::string& name);

struct CutoffMetrics {
  std::size_t k = 20;
  double recall = 0.0;
  double ndcg = 0.0;
};

struct UserRecord {
  NodeId user = 0;
  std::size_t num_relevant = 0;
  std::vector<std::size_t> hit_ranks;  // 1-based ranks of relevant items within the largest cutoff
};

struct RankingReport {
  EvalSplit split = EvalSplit::kTest;
  std::vector<CutoffMetrics> metrics;
  std::size_t num_users_evaluated = 0;
  std::vector<UserRecord> users;  // filled only on request

  const CutoffMetrics& at(std::size_t k) const;
};

/// Every item not among the user's training positives, best first; equal
/// scores fall back to ascending item id.
template <typename Scalar>
std::vector<NodeId> rank_all(NodeId user, const Matrix<Scalar>& final_users, const Matrix<Scalar>& final_items,
                             const InteractionGraph& graph);

/// Same ordering as rank_all, truncated to the first `k` entries.
template <typename Scalar>
std::vector<NodeId> top_k(NodeId user, const Matrix<Scalar>& final_users, const Matrix<Scalar>& final_items,
                          const InteractionGraph& graph, std::size_t k);

/// |top-k ∩ relevant| / |relevant|. `relevant` must be sorted and non-empty.
double recall_at_k(std::span<const NodeId> ranked, std::span<const NodeId> relevant, std::size_t k);

/// Binary-relevance NDCG with a log2(rank + 1) discount and the ideal DCG
/// truncated at min(k, |relevant|). `relevant` must be sorted and non-empty.
double ndcg_at_k(std::span<const NodeId> ranked, std::span<const NodeId> relevant, std::size_t k);

/// All-ranking protocol over users with a non-empty split; scores come from
/// the given final embeddings.
template <typename Scalar>
RankingReport evaluate_embeddings(const Matrix<Scalar>& final_users, const Matrix<Scalar>& final_items,
                                  const InteractionGraph& graph, std::span<const std::size_t> cutoffs, EvalSplit split,
                                  bool per_user = false);

/// Full-graph forward pass (no sampling) followed by evaluate_embeddings.
template <typename Scalar>
RankingReport evaluate(const Model<Scalar>& model, const InteractionGraph& graph, std::span<const std::size_t> cutoffs,
                       EvalSplit split, bool per_user = false);

std::string report_to_json(const RankingReport& report);

}  // namespace ngat
