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

#include "ngat/graph_io.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <sstream>

#include "test_util.hpp"

namespace ngat {
namespace {

LoadResult load_string(const std::string& text, InputFormat format) {
  std::istringstream in(text);
  return load_interactions(in, format);
}

// Repeatedly rescans the whole edge set; quadratic but obviously correct.
std::set<Edge> naive_k_core(EdgeList edges, std::size_t k) {
  std::set<Edge> alive(edges.begin(), edges.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::uint64_t, std::size_t> user_deg, item_deg;
    for (const Edge& e : alive) {
      ++user_deg[e.user];
      ++item_deg[e.item];
    }
    for (auto it = alive.begin(); it != alive.end();) {
      if (user_deg[it->user] < k || item_deg[it->item] < k) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return alive;
}

std::set<Edge> original_edges(const DenseEdges& d) {
  std::set<Edge> out;
  for (const Edge& e : d.edges) out.insert({d.ids.users[e.user], d.ids.items[e.item]});
  return out;
}

TEST(LoadInteractions, AdjacencyLineDropsDuplicates) {
  auto r = load_string("0 5 7 7\n", InputFormat::kAdjacency);
  EXPECT_EQ(r.edges, (EdgeList{{0, 5}, {0, 7}}));
  EXPECT_EQ(r.num_duplicates, 1u);
}

TEST(LoadInteractions, PairsDensifyToTwoUsersTwoItems) {
  auto r = load_string("0 1\n0 2\n1 1\n", InputFormat::kPairs);
  ASSERT_EQ(r.edges.size(), 3u);
  auto d = densify(r.edges);
  EXPECT_EQ(d.num_users(), 2u);
  EXPECT_EQ(d.num_items(), 2u);
  EXPECT_EQ(d.edges.size(), 3u);
}

TEST(LoadInteractions, EmptyInputWarns) {
  auto r = load_string("", InputFormat::kPairs);
  EXPECT_TRUE(r.edges.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(LoadInteractions, MalformedLineReportsLineNumber) {
  try {
    load_string("0 1\n0 x\n", InputFormat::kPairs);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_string("0 1 2\n", InputFormat::kPairs), ParseError);
}

TEST(LoadInteractions, NegativeIdRejected) {
  try {
    load_string("3 4 -1\n", InputFormat::kAdjacency);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("negative"), std::string::npos);
  }
}

TEST(Densify, AssignsIdsInAscendingOriginalOrder) {
  auto d = densify({{50, 9}, {7, 3}, {50, 3}});
  EXPECT_EQ(d.ids.users, (std::vector<std::uint64_t>{7, 50}));
  EXPECT_EQ(d.ids.items, (std::vector<std::uint64_t>{3, 9}));
  EXPECT_EQ(d.edges, (EdgeList{{0, 0}, {1, 0}, {1, 1}}));
}

TEST(KCore, StarCascadesToEmpty) {
  EdgeList star;
  for (std::uint64_t u = 0; u < 12; ++u) star.push_back({u, 0});
  EXPECT_THROW(apply_k_core(star, 10), GraphError);
}

TEST(KCore, CompleteTenByTenUnchanged) {
  EdgeList full;
  for (std::uint64_t u = 0; u < 10; ++u) {
    for (std::uint64_t i = 0; i < 10; ++i) full.push_back({u + 100, i + 200});
  }
  auto out = apply_k_core(full, 10);
  EXPECT_EQ(out.edges.size(), 100u);
  EXPECT_EQ(original_edges(out), std::set<Edge>(full.begin(), full.end()));
}

TEST(KCore, ChainOfThirtyEdgesVanishes) {
  // u0 - i0 - u1 - i1 - ... alternating, 30 edges.
  EdgeList chain;
  for (std::uint64_t s = 0; s < 15; ++s) {
    chain.push_back({s, s});
    chain.push_back({s + 1, s});
  }
  ASSERT_EQ(chain.size(), 30u);
  EXPECT_TRUE(naive_k_core(chain, 10).empty());
  EXPECT_THROW(apply_k_core(chain, 10), GraphError);
}

TEST(KCore, MatchesNaiveOracleOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::uniform_int_distribution<std::uint64_t> pu(0, 60), pi(0, 40);
    EdgeList edges;
    for (int e = 0; e < 900; ++e) edges.push_back({pu(rng) * 3, pi(rng) * 7});
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    const std::size_t k = 1 + trial % 12;
    auto expected = naive_k_core(edges, k);
    if (expected.empty()) {
      EXPECT_THROW(apply_k_core(edges, k), GraphError);
      continue;
    }
    auto out = apply_k_core(edges, k);
    EXPECT_EQ(original_edges(out), expected);
    std::vector<std::size_t> ud(out.num_users()), id(out.num_items());
    for (const Edge& e : out.edges) {
      ++ud[e.user];
      ++id[e.item];
    }
    EXPECT_GE(*std::min_element(ud.begin(), ud.end()), k);
    EXPECT_GE(*std::min_element(id.begin(), id.end()), k);
  }
}

DenseEdges uniform_users(std::size_t users, std::size_t items_per_user, std::size_t num_items) {
  EdgeList edges;
  for (std::uint64_t u = 0; u < users; ++u) {
    for (std::uint64_t t = 0; t < items_per_user; ++t) edges.push_back({u, (u * 7 + t) % num_items});
  }
  return densify(edges);
}

TEST(Split, TenItemsGiveSevenOneTwo) {
  auto g = split(uniform_users(1, 10, 10), {0.8, 0.1, 42});
  EXPECT_EQ(g.train.user_items.degree(0), 7u);
  EXPECT_EQ(g.val_pos.degree(0), 1u);
  EXPECT_EQ(g.test_pos.degree(0), 2u);
}

TEST(Split, DeterministicForSeed) {
  auto edges = uniform_users(50, 13, 40);
  EXPECT_EQ(split(edges, {0.8, 0.1, 9}), split(edges, {0.8, 0.1, 9}));
  EXPECT_NE(split(edges, {0.8, 0.1, 9}).test_pos, split(edges, {0.8, 0.1, 10}).test_pos);
}

TEST(Split, HundredUsersWithTenItemsHoldOutTwoHundred) {
  // Reference count: test = deg - max(1, floor(0.8 deg)) per user.
  std::size_t expected = 0;
  for (int u = 0; u < 100; ++u) expected += 10 - std::max<std::size_t>(1, static_cast<std::size_t>(0.8 * 10 + 1e-9));
  auto g = split(uniform_users(100, 10, 37), {0.8, 0.1, 3});
  EXPECT_EQ(expected, 200u);
  EXPECT_EQ(g.test_pos.num_edges(), expected);
}

TEST(Split, SingleInteractionStaysInTrain) {
  auto g = split(densify({{0, 0}, {1, 0}, {1, 1}}), {0.8, 0.1, 1});
  EXPECT_EQ(g.train.user_items.degree(0), 1u);
  EXPECT_EQ(g.test_pos.degree(0), 0u);
  EXPECT_EQ(g.test_pos.degree(1), 1u);
}

TEST(Split, RejectsBadFractions) {
  EXPECT_THROW(split(uniform_users(2, 5, 5), {1.0, 0.1, 0}), std::invalid_argument);
  EXPECT_THROW(split(uniform_users(2, 5, 5), {0.8, 0.0, 0}), std::invalid_argument);
}

TEST(Split, DisjointCoveringAndTransposeConsistent) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> pu(0, 299), pi(0, 199);
  EdgeList raw;
  for (int e = 0; e < 10000; ++e) raw.push_back({pu(rng), pi(rng)});
  auto dense = densify(raw);
  auto g = split(dense, {0.8, 0.1, 5});

  std::vector<std::set<NodeId>> all(g.num_users);
  for (const Edge& e : dense.edges) all[e.user].insert(static_cast<NodeId>(e.item));
  for (std::size_t u = 0; u < g.num_users; ++u) {
    std::set<NodeId> seen;
    std::size_t total = 0;
    for (const Adjacency* part : {&g.train.user_items, &g.val_pos, &g.test_pos}) {
      for (NodeId i : part->neighbors(u)) {
        EXPECT_TRUE(seen.insert(i).second) << "item in two splits";
        ++total;
      }
    }
    EXPECT_EQ(seen, all[u]);
    EXPECT_EQ(total, all[u].size());
    EXPECT_GE(g.train.user_items.degree(u), 1u);
  }

  // Exhaustive transpose check.
  std::set<std::pair<NodeId, NodeId>> forward, backward;
  for (std::size_t u = 0; u < g.num_users; ++u) {
    for (NodeId i : g.train.user_items.neighbors(u)) forward.insert({static_cast<NodeId>(u), i});
  }
  for (std::size_t i = 0; i < g.num_items; ++i) {
    auto nb = g.train.item_users.neighbors(i);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    for (NodeId u : nb) backward.insert({u, static_cast<NodeId>(i)});
  }
  EXPECT_EQ(forward, backward);
}

TEST(Snapshot, RoundTripAndByteIdentical) {
  auto g = split(uniform_users(20, 12, 30), {0.8, 0.1, 2});
  std::ostringstream a, b;
  write_snapshot(a, g);
  write_snapshot(b, split(uniform_users(20, 12, 30), {0.8, 0.1, 2}));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, 4), "NGIG");
  std::istringstream in(a.str());
  EXPECT_EQ(read_snapshot(in), g);
}

TEST(Snapshot, RejectsCorruptInput) {
  auto g = split(uniform_users(3, 5, 5), {0.8, 0.1, 2});
  std::ostringstream out;
  write_snapshot(out, g);
  std::string bytes = out.str();
  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_ANY_THROW(read_snapshot(truncated));
  bytes[0] = 'X';
  std::istringstream bad_magic(bytes);
  EXPECT_THROW(read_snapshot(bad_magic), GraphError);
}

}  // namespace
}  // namespace ngat
