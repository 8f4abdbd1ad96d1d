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

#include "ngat/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace ngat {

std::string to_string(EvalSplit split) { return split == EvalSplit::kValidation ? "validation" : "test"; }

EvalSplit parse_split(const std::string& name) {
  if (name == "validation" || name == "val") return EvalSplit::kValidation;
  if (name == "test") return EvalSplit::kTest;
  throw std::invalid_argument("unknown split '" + name + "'");
}

const CutoffMetrics& RankingReport::at(std::size_t k) const {
  for (const auto& m : metrics) {
    if (m.k == k) return m;
  }
  throw std::out_of_range("report has no cutoff " + std::to_string(k));
}

namespace {

template <typename Scalar>
std::vector<NodeId> ranked_candidates(NodeId user, const Matrix<Scalar>& final_users,
                                      const Matrix<Scalar>& final_items, const InteractionGraph& graph,
                                      std::size_t k) {
  if (final_users.rows() != static_cast<Eigen::Index>(graph.num_users) ||
      final_items.rows() != static_cast<Eigen::Index>(graph.num_items)) {
    throw std::invalid_argument("embedding dimensions do not match the graph");
  }
  const Vector<Scalar> scores = final_items * final_users.row(user).transpose();
  auto owned = graph.train.user_items.neighbors(user);
  std::vector<NodeId> candidates;
  candidates.reserve(graph.num_items - owned.size());
  auto it = owned.begin();
  for (NodeId i = 0; i < graph.num_items; ++i) {
    while (it != owned.end() && *it < i) ++it;
    if (it != owned.end() && *it == i) continue;
    candidates.push_back(i);
  }
  auto better = [&](NodeId a, NodeId b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  if (k < candidates.size()) {
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end(),
                      better);
    candidates.resize(k);
  } else {
    std::sort(candidates.begin(), candidates.end(), better);
  }
  return candidates;
}

bool contains(std::span<const NodeId> sorted, NodeId id) { return std::binary_search(sorted.begin(), sorted.end(), id); }

}  // namespace

template <typename Scalar>
std::vector<NodeId> rank_all(NodeId user, const Matrix<Scalar>& final_users, const Matrix<Scalar>& final_items,
                             const InteractionGraph& graph) {
  return ranked_candidates(user, final_users, final_items, graph, graph.num_items);
}

template <typename Scalar>
std::vector<NodeId> top_k(NodeId user, const Matrix<Scalar>& final_users, const Matrix<Scalar>& final_items,
                          const InteractionGraph& graph, std::size_t k) {
  return ranked_candidates(user, final_users, final_items, graph, k);
}

double recall_at_k(std::span<const NodeId> ranked, std::span<const NodeId> relevant, std::size_t k) {
  if (relevant.empty()) throw std::invalid_argument("recall_at_k: empty relevant set");
  std::size_t hits = 0;
  for (std::size_t r = 0; r < std::min(k, ranked.size()); ++r) hits += contains(relevant, ranked[r]) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

double ndcg_at_k(std::span<const NodeId> ranked, std::span<const NodeId> relevant, std::size_t k) {
  if (relevant.empty()) throw std::invalid_argument("ndcg_at_k: empty relevant set");
  double dcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, ranked.size()); ++r) {
    if (contains(relevant, ranked[r])) dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  double idcg = 0.0;
  for (std::size_t r = 0; r < std::min(k, relevant.size()); ++r) idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  return idcg > 0.0 ? dcg / idcg : 0.0;
}

template <typename Scalar>
RankingReport evaluate_embeddings(const Matrix<Scalar>& final_users, const Matrix<Scalar>& final_items,
                                  const InteractionGraph& graph, std::span<const std::size_t> cutoffs, EvalSplit split,
                                  bool per_user) {
  if (cutoffs.empty()) throw std::invalid_argument("evaluate: at least one cutoff is required");
  const Adjacency& truth = split == EvalSplit::kValidation ? graph.val_pos : graph.test_pos;
  const std::size_t max_k = *std::max_element(cutoffs.begin(), cutoffs.end());

  RankingReport report;
  report.split = split;
  for (std::size_t k : cutoffs) report.metrics.push_back({k, 0.0, 0.0});
  for (std::size_t u = 0; u < graph.num_users; ++u) {
    auto relevant = truth.neighbors(u);
    if (relevant.empty()) continue;
    const auto ranked = top_k(static_cast<NodeId>(u), final_users, final_items, graph, max_k);
    for (auto& m : report.metrics) {
      m.recall += recall_at_k(ranked, relevant, m.k);
      m.ndcg += ndcg_at_k(ranked, relevant, m.k);
    }
    ++report.num_users_evaluated;
    if (per_user) {
      UserRecord rec;
      rec.user = static_cast<NodeId>(u);
      rec.num_relevant = relevant.size();
      for (std::size_t r = 0; r < ranked.size(); ++r) {
        if (contains(relevant, ranked[r])) rec.hit_ranks.push_back(r + 1);
      }
      report.users.push_back(std::move(rec));
    }
  }
  if (report.num_users_evaluated > 0) {
    const auto n = static_cast<double>(report.num_users_evaluated);
    for (auto& m : report.metrics) {
      m.recall /= n;
      m.ndcg /= n;
    }
  }
  return report;
}

template <typename Scalar>
RankingReport evaluate(const Model<Scalar>& model, const InteractionGraph& graph, std::span<const std::size_t> cutoffs,
                       EvalSplit split, bool per_user) {
  if (model.table.num_users() != graph.num_users || model.table.num_items() != graph.num_items) {
    throw std::invalid_argument("checkpoint has " + std::to_string(model.table.num_users()) + " users / " +
                                std::to_string(model.table.num_items()) + " items, graph has " +
                                std::to_string(graph.num_users) + " / " + std::to_string(graph.num_items));
  }
  const auto acts = forward(model, full_graph_layers(graph, model.config.num_layers));
  return evaluate_embeddings(acts.final_users, acts.final_items, graph, cutoffs, split, per_user);
}

std::string report_to_json(const RankingReport& report) {
  nlohmann::ordered_json j;
  j["split"] = to_string(report.split);
  j["num_users_evaluated"] = report.num_users_evaluated;
  j["metrics"] = nlohmann::ordered_json::array();
  for (const auto& m : report.metrics) {
    j["metrics"].push_back({{"k", m.k}, {"recall", m.recall}, {"ndcg", m.ndcg}});
  }
  if (!report.users.empty()) {
    j["users"] = nlohmann::ordered_json::array();
    for (const auto& u : report.users) {
      j["users"].push_back({{"user", u.user}, {"num_relevant", u.num_relevant}, {"hit_ranks", u.hit_ranks}});
    }
  }
  return j.dump(2);
}

#define NGAT_INSTANTIATE(Scalar)                                                                                    \
  template std::vector<NodeId> rank_all<Scalar>(NodeId, const Matrix<Scalar>&, const Matrix<Scalar>&,              \
                                                const InteractionGraph&);                                          \
  template std::vector<NodeId> top_k<Scalar>(NodeId, const Matrix<Scalar>&, const Matrix<Scalar>&,                 \
                                             const InteractionGraph&, std::size_t);                                \
  template RankingReport evaluate_embeddings<Scalar>(const Matrix<Scalar>&, const Matrix<Scalar>&,                 \
                                                     const InteractionGraph&, std::span<const std::size_t>,        \
                                                     EvalSplit, bool);                                             \
  template RankingReport evaluate<Scalar>(const Model<Scalar>&, const InteractionGraph&,                           \
                                          std::span<const std::size_t>, EvalSplit, bool);

NGAT_INSTANTIATE(float)
NGAT_INSTANTIATE(double)

#undef NGAT_INSTANTIATE

}  // namespace ngat
