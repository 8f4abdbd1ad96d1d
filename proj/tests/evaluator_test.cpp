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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "ngat/synthetic.hpp"
#include "test_util.hpp"

namespace ngat {
namespace {

Matrix<double> gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  return Matrix<double>::NullaryExpr(rows, cols, [&] { return g(rng); });
}

TEST(RankAll, ExcludesTrainingItemsOnly) {
  auto g = make_graph(1, 4, {{1}}, {{2}}, {{3}});
  Matrix<double> u = Matrix<double>::Ones(1, 1), i(4, 1);
  i << 0.1, 9.0, 0.5, 0.2;
  EXPECT_EQ(rank_all<double>(0, u, i, g), (std::vector<NodeId>{2, 3, 0}));
}

TEST(RankAll, TiesBreakByAscendingId) {
  auto g = make_graph(1, 5, {{}});
  Matrix<double> u = Matrix<double>::Ones(1, 1), i(5, 1);
  i << 1, 2, 1, 2, 1;
  EXPECT_EQ(rank_all<double>(0, u, i, g), (std::vector<NodeId>{1, 3, 0, 2, 4}));
  EXPECT_EQ(top_k<double>(0, u, i, g, 3), (std::vector<NodeId>{1, 3, 0}));
}

TEST(RankAll, MatchesNaiveSort) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::random_graph(rng, 5, 5, 0.3, false);
    Matrix<double> u = gaussian(rng, 5, 2), it = gaussian(rng, 5, 2);
    for (NodeId user = 0; user < 5; ++user) {
      std::vector<NodeId> want;
      auto train = g.train.user_items.neighbors(user);
      for (NodeId i = 0; i < 5; ++i) {
        if (std::find(train.begin(), train.end(), i) == train.end()) want.push_back(i);
      }
      std::stable_sort(want.begin(), want.end(),
                       [&](NodeId a, NodeId b) { return u.row(user).dot(it.row(a)) > u.row(user).dot(it.row(b)); });
      EXPECT_EQ(rank_all<double>(user, u, it, g), want);
      EXPECT_EQ(top_k<double>(user, u, it, g, 2), std::vector<NodeId>(want.begin(), want.begin() + std::min<std::size_t>(2, want.size())));
    }
  }
}

TEST(Metrics, WorkedExamples) {
  const std::vector<NodeId> ranked = {9, 1, 8, 7};
  const std::vector<NodeId> four = {0, 1, 2, 3};
  EXPECT_DOUBLE_EQ(recall_at_k(ranked, four, 20), 0.25);
  const std::vector<NodeId> one = {1};
  EXPECT_NEAR(ndcg_at_k(ranked, one, 20), 1.0 / std::log2(3.0), 1e-15);
  EXPECT_NEAR(ndcg_at_k(ranked, one, 20), 0.6309, 1e-4);
  EXPECT_EQ(ndcg_at_k(ranked, one, 1), 0.0);
  const std::vector<NodeId> first = {9};
  EXPECT_EQ(ndcg_at_k(ranked, first, 20), 1.0);
  EXPECT_EQ(recall_at_k(ranked, first, 1), 1.0);
}

// DCG / IDCG written out term by term.
double literal_ndcg(const std::vector<NodeId>& ranked, const std::vector<NodeId>& rel, std::size_t k) {
  double dcg = 0.0, idcg = 0.0;
  for (std::size_t r = 1; r <= std::min(k, ranked.size()); ++r) {
    if (std::find(rel.begin(), rel.end(), ranked[r - 1]) != rel.end()) dcg += 1.0 / std::log2(r + 1.0);
  }
  for (std::size_t r = 1; r <= std::min(k, rel.size()); ++r) idcg += 1.0 / std::log2(r + 1.0);
  return dcg / idcg;
}

TEST(Evaluate, MatchesLiteralFormulas) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> size(3, 20);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t nu = size(rng), ni = size(rng);
    std::bernoulli_distribution coin(0.3);
    std::vector<std::vector<NodeId>> tr(nu), te(nu);
    for (std::size_t u = 0; u < nu; ++u) {
      for (NodeId i = 0; i < ni; ++i) {
        if (coin(rng)) (coin(rng) ? te : tr)[u].push_back(i);
      }
    }
    auto g = make_graph(nu, ni, tr, {}, te);
    Matrix<double> U = gaussian(rng, nu, 3), I = gaussian(rng, ni, 3);
    const std::size_t cutoffs[] = {1, 5, 20};
    auto report = evaluate_embeddings(U, I, g, cutoffs, EvalSplit::kTest);
    for (std::size_t k : cutoffs) {
      double recall = 0.0, ndcg = 0.0;
      std::size_t n = 0;
      for (NodeId u = 0; u < nu; ++u) {
        if (te[u].empty()) continue;
        auto ranked = rank_all<double>(u, U, I, g);
        std::size_t hits = 0;
        for (std::size_t r = 0; r < std::min(k, ranked.size()); ++r) {
          hits += std::count(te[u].begin(), te[u].end(), ranked[r]);
        }
        recall += double(hits) / double(te[u].size());
        ndcg += literal_ndcg(ranked, te[u], k);
        ++n;
      }
      EXPECT_EQ(report.num_users_evaluated, n);
      if (n == 0) continue;
      EXPECT_NEAR(report.at(k).recall, recall / double(n), 1e-12);
      EXPECT_NEAR(report.at(k).ndcg, ndcg / double(n), 1e-12);
    }
  }
}

TEST(Evaluate, RecallMonotoneInCutoff) {
  std::mt19937_64 rng(3);
  auto g = split(densify(generate_planted({2, 30, 30, 0.3, 0.05, 3})), {0.8, 0.1, 3});
  Matrix<double> U = gaussian(rng, g.num_users, 4), I = gaussian(rng, g.num_items, 4);
  const std::size_t cutoffs[] = {1, 2, 5, 10, 20, 50};
  auto report = evaluate_embeddings(U, I, g, cutoffs, EvalSplit::kTest);
  for (std::size_t n = 1; n < report.metrics.size(); ++n) {
    EXPECT_GE(report.metrics[n].recall, report.metrics[n - 1].recall);
  }
}

TEST(Evaluate, RandomEmbeddingsHitAnalyticBaseline) {
  auto g = split(densify(generate_planted(PlantedBlocksSpec{})), SplitSpec{});
  const std::size_t k = 20;
  double baseline = 0.0;
  std::size_t users = 0;
  for (NodeId u = 0; u < g.num_users; ++u) {
    if (g.test_pos.degree(u) == 0) continue;
    baseline += double(k) / double(g.num_items - g.train.user_items.degree(u));
    ++users;
  }
  baseline /= double(users);

  const int seeds = 30;
  std::vector<double> recalls;
  for (int s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(100 + s);
    Matrix<double> U = gaussian(rng, g.num_users, 16), I = gaussian(rng, g.num_items, 16);
    const std::size_t cutoffs[] = {k};
    recalls.push_back(evaluate_embeddings(U, I, g, cutoffs, EvalSplit::kTest).at(k).recall);
  }
  const double mean = std::accumulate(recalls.begin(), recalls.end(), 0.0) / seeds;
  double var = 0.0;
  for (double r : recalls) var += (r - mean) * (r - mean);
  const double se = std::sqrt(var / (seeds - 1) / seeds);
  EXPECT_LT(std::abs(mean - baseline), 3 * se) << mean << " vs " << baseline;
}

TEST(Evaluate, BlockIndicatorsArePerfect) {
  auto g = split(densify(generate_planted({2, 50, 50, 1.0, 0.0, 4})), SplitSpec{0.8, 0.1, 4});
  Matrix<double> U = Matrix<double>::Zero(g.num_users, 2), I = Matrix<double>::Zero(g.num_items, 2);
  for (NodeId u = 0; u < g.num_users; ++u) U(u, u / 50) = 1.0;
  for (NodeId i = 0; i < g.num_items; ++i) I(i, i / 50) = 1.0;
  for (NodeId u = 0; u < g.num_users; ++u) ASSERT_LE(g.test_pos.degree(u), 20u);
  const std::size_t cutoffs[] = {20};
  auto report = evaluate_embeddings(U, I, g, cutoffs, EvalSplit::kTest);
  EXPECT_EQ(report.num_users_evaluated, g.num_users);
  EXPECT_DOUBLE_EQ(report.at(20).recall, 1.0);
}

TEST(Evaluate, ValidationAndPerUserRecords) {
  auto g = make_graph(3, 4, {{0}, {1}, {2}}, {{1}, {}, {}}, {{2}, {3}, {}});
  Matrix<double> U = Matrix<double>::Ones(3, 1), I(4, 1);
  I << 4, 3, 2, 1;
  const std::size_t cutoffs[] = {1, 2};
  auto val = evaluate_embeddings(U, I, g, cutoffs, EvalSplit::kValidation, true);
  EXPECT_EQ(val.num_users_evaluated, 1u);
  EXPECT_EQ(val.at(1).recall, 1.0);
  auto test = evaluate_embeddings(U, I, g, cutoffs, EvalSplit::kTest, true);
  EXPECT_EQ(test.num_users_evaluated, 2u);
  ASSERT_EQ(test.users.size(), 2u);
  EXPECT_EQ(test.users[0].hit_ranks, (std::vector<std::size_t>{2}));
  EXPECT_EQ(test.users[1].hit_ranks, (std::vector<std::size_t>{}));
  EXPECT_DOUBLE_EQ(test.at(2).recall, 0.5);
  EXPECT_THROW(test.at(7), std::out_of_range);
}

TEST(Evaluate, ModelPathAndDeterministicReport) {
  std::mt19937_64 rng(5);
  auto g = split(densify(generate_planted({2, 20, 20, 0.4, 0.05, 5})), {0.8, 0.1, 5});
  auto m = init_model<float>(g.num_users, g.num_items, ModelConfig{8, 2}, 1);
  const std::size_t cutoffs[] = {10, 20};
  auto a = report_to_json(evaluate(m, g, cutoffs, EvalSplit::kTest));
  auto b = report_to_json(evaluate(m, g, cutoffs, EvalSplit::kTest));
  EXPECT_EQ(a, b);
  auto acts = forward(m, full_graph_layers(g, 2));
  EXPECT_EQ(a, report_to_json(evaluate_embeddings(acts.final_users, acts.final_items, g, cutoffs, EvalSplit::kTest)));
  auto wrong = init_model<float>(g.num_users + 1, g.num_items, ModelConfig{8, 2}, 1);
  EXPECT_THROW(evaluate(wrong, g, cutoffs, EvalSplit::kTest), std::invalid_argument);
}

TEST(EvalSplit, Parsing) {
  EXPECT_EQ(parse_split("test"), EvalSplit::kTest);
  EXPECT_EQ(parse_split("validation"), EvalSplit::kValidation);
  EXPECT_THROW(parse_split("train"), std::invalid_argument);
}

}  // namespace
}  // namespace ngat
