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

#include "ngat/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "ngat/rng.hpp"

namespace ngat {

void PlantedBlocksSpec::validate() const {
  if (num_blocks == 0 || users_per_block == 0 || items_per_block == 0) {
    throw std::invalid_argument("planted blocks: sizes must be positive");
  }
  for (double p : {in_block_edge_prob, cross_block_edge_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("planted blocks: probabilities must lie in [0, 1]");
  }
}

double PlantedBlocksSpec::expected_edges() const {
  const double pairs_per_block = static_cast<double>(users_per_block * items_per_block);
  const auto b = static_cast<double>(num_blocks);
  return b * pairs_per_block * in_block_edge_prob + b * (b - 1) * pairs_per_block * cross_block_edge_prob;
}

double PlantedBlocksSpec::edge_count_variance() const {
  const double pairs_per_block = static_cast<double>(users_per_block * items_per_block);
  const auto b = static_cast<double>(num_blocks);
  const double pi = in_block_edge_prob, pc = cross_block_edge_prob;
  return b * pairs_per_block * pi * (1 - pi) + b * (b - 1) * pairs_per_block * pc * (1 - pc);
}

EdgeList generate_planted(const PlantedBlocksSpec& spec) {
  spec.validate();
  auto rng = make_stream(spec.rng_seed, {tag(StreamTag::kSynthetic)});
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  EdgeList edges;
  for (std::size_t u = 0; u < spec.num_users(); ++u) {
    for (std::size_t i = 0; i < spec.num_items(); ++i) {
      const double p = spec.user_block(u) == spec.item_block(i) ? spec.in_block_edge_prob : spec.cross_block_edge_prob;
      if (coin(rng) < p) edges.push_back({u, i});
    }
  }
  return edges;
}

namespace {

using Vec = std::vector<double>;
using Table = std::vector<Vec>;

Table to_table(const Matrix<double>& m) {
  Table t(static_cast<std::size_t>(m.rows()), Vec(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
  }
  return t;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

// out = relu(W x) with W stored d x d.
Vec relu_transform(const Matrix<double>& w, const Vec& x) {
  Vec out(x.size(), 0.0);
  for (std::size_t r = 0; r < x.size(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) s += w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
    out[r] = std::max(0.0, s);
  }
  return out;
}

Vec transform(const Matrix<double>& w, const Vec& x) {
  Vec out(x.size(), 0.0);
  for (std::size_t r = 0; r < x.size(); ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) {
      out[r] += w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * x[c];
    }
  }
  return out;
}

double cosine_relu(const Vec& a, const Vec& b, double eps) {
  const double c = dot(a, b) / (std::max(norm(a), eps) * std::max(norm(b), eps));
  return std::min(1.0, std::max(0.0, c));
}

void softmax(Vec& z) {
  double mx = z[0];
  for (double v : z) mx = std::max(mx, v);
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : z) v /= total;
}

struct SideRef {
  const Adjacency& adj;      // destination -> sources
  const Adjacency& src_adj;  // sources' own lists
  const Table& dst;          // destination embeddings e^(k-1)
  const Table& src;          // source embeddings e^(k-1)
  const Table& src_feat;     // what the attention and messages use
};

Table aggregate(const SideRef& s, const Model<double>& model, std::size_t layer, Vec& alphas) {
  const ModelConfig& cfg = model.config;
  const std::size_t d = cfg.embedding_dim;
  Table out(s.adj.num_nodes(), Vec(d, 0.0));
  alphas.assign(s.adj.num_edges(), 0.0);
  for (std::size_t x = 0; x < s.adj.num_nodes(); ++x) {
    const auto nb = s.adj.neighbors(x);
    const std::size_t n = nb.size();
    if (n == 0) continue;
    Vec alpha(n, 0.0);
    switch (cfg.aggregator) {
      case Aggregator::kNgat:
      case Aggregator::kNgatNonlinear:
        for (std::size_t a = 0; a < n; ++a) {
          double sum = 0.0;
          for (std::size_t b = 0; b < n; ++b) {
            if (a == b) {
              sum += cfg.exclude_self_pairs ? 0.0 : 1.0;
            } else {
              sum += cosine_relu(s.src_feat[nb[a]], s.src_feat[nb[b]], cfg.epsilon);
            }
          }
          alpha[a] = sum / static_cast<double>(n);
        }
        break;
      case Aggregator::kLightGatDp:
        for (std::size_t a = 0; a < n; ++a) alpha[a] = dot(s.dst[x], s.src[nb[a]]) / std::sqrt(static_cast<double>(d));
        softmax(alpha);
        break;
      case Aggregator::kLightGatMlp: {
        const Matrix<double>& w = model.extra.first(layer);
        const Matrix<double>& att = model.extra.second(layer);
        const Vec hd = transform(w, s.dst[x]);
        for (std::size_t a = 0; a < n; ++a) {
          const Vec hs = transform(w, s.src[nb[a]]);
          double z = 0.0;
          for (std::size_t c = 0; c < d; ++c) {
            z += att(0, static_cast<Eigen::Index>(c)) * hd[c] + att(0, static_cast<Eigen::Index>(d + c)) * hs[c];
          }
          alpha[a] = z > 0.0 ? z : kLeakyReluSlope * z;
        }
        softmax(alpha);
        break;
      }
      case Aggregator::kLightGcnMean:
        for (std::size_t a = 0; a < n; ++a) {
          alpha[a] = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(1, s.src_adj.degree(nb[a]))));
        }
        break;
    }
    for (std::size_t a = 0; a < n; ++a) {
      alphas[s.adj.offsets[x] + a] = alpha[a];
      for (std::size_t c = 0; c < d; ++c) out[x][c] += alpha[a] * s.src_feat[nb[a]][c] / std::sqrt(static_cast<double>(n));
    }
  }
  return out;
}

}  // namespace

ReferenceForward dense_reference_forward(const LayerGraphs& layers, const Model<double>& model) {
  const ModelConfig& cfg = model.config;
  if (layers.size() != cfg.num_layers) throw std::invalid_argument("reference: wrong number of layer graphs");
  for (const auto& g : layers) {
    if (g.get().user_items.num_edges() > kReferenceMaxEdges || g.get().item_users.num_edges() > kReferenceMaxEdges) {
      throw std::invalid_argument("reference forward is limited to " + std::to_string(kReferenceMaxEdges) + " edges");
    }
  }
  ReferenceForward ref;
  ref.users.push_back(to_table(model.table.users.value));
  ref.items.push_back(to_table(model.table.items.value));
  for (std::size_t k = 0; k < cfg.num_layers; ++k) {
    const BipartiteAdjacency& g = layers[k].get();
    const Table& eu = ref.users[k];
    const Table& ei = ref.items[k];
    Table pu = eu, pi = ei;
    if (cfg.aggregator == Aggregator::kNgatNonlinear) {
      for (auto& row : pu) row = relu_transform(model.extra.first(k), row);
      for (auto& row : pi) row = relu_transform(model.extra.second(k), row);
    }
    Vec ua, ia;
    Table next_u = aggregate({g.user_items, g.item_users, eu, ei, pi}, model, k, ua);
    Table next_i = aggregate({g.item_users, g.user_items, ei, eu, pu}, model, k, ia);
    ref.user_alpha.push_back(std::move(ua));
    ref.item_alpha.push_back(std::move(ia));
    ref.users.push_back(std::move(next_u));
    ref.items.push_back(std::move(next_i));
  }
  auto sum_layers = [](const std::vector<Table>& per_layer) {
    Table out = per_layer[0];
    for (std::size_t k = 1; k < per_layer.size(); ++k) {
      for (std::size_t n = 0; n < out.size(); ++n) {
        for (std::size_t c = 0; c < out[n].size(); ++c) out[n][c] += per_layer[k][n][c];
      }
    }
    return out;
  };
  ref.final_users = sum_layers(ref.users);
  ref.final_items = sum_layers(ref.items);
  return ref;
}

ReferenceForward dense_reference_forward(const InteractionGraph& graph, const Model<double>& model) {
  return dense_reference_forward(full_graph_layers(graph, model.config.num_layers), model);
}

}  // namespace ngat
