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

#include "ngat/model.hpp"

#include <random>
#include <stdexcept>

#include "ngat/rng.hpp"

namespace ngat {

std::string to_string(Aggregator a) {
  switch (a) {
    case Aggregator::kNgat: return "ngat";
    case Aggregator::kNgatNonlinear: return "ngat_nonlinear";
    case Aggregator::kLightGatMlp: return "lightgat_mlp";
    case Aggregator::kLightGatDp: return "lightgat_dp";
    case Aggregator::kLightGcnMean: return "lightgcn_mean";
  }
  return "unknown";
}

Aggregator parse_aggregator(const std::string& name) {
  for (Aggregator a : kAllAggregators) {
    if (to_string(a) == name) return a;
  }
  throw std::invalid_argument("unknown aggregator variant '" + name + "'");
}

void ModelConfig::validate() const {
  if (embedding_dim < 1) throw std::invalid_argument("embedding_dim must be >= 1");
  if (num_layers > 4) throw std::invalid_argument("num_layers must be in [0, 4]");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

namespace {

template <typename Scalar>
Matrix<Scalar> xavier(Rng& rng, Eigen::Index rows, Eigen::Index cols, double fan_in, double fan_out) {
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Matrix<Scalar> m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = static_cast<Scalar>(dist(rng));
  }
  return m;
}

}  // namespace

template <typename Scalar>
EmbeddingTable<Scalar> init_embeddings(std::size_t num_users, std::size_t num_items, std::size_t dim,
                                       std::uint64_t rng_seed) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
  const auto d = static_cast<double>(dim);
  auto rng = make_stream(rng_seed, {tag(StreamTag::kInit), 0});
  EmbeddingTable<Scalar> t;
  t.users = Parameter<Scalar>(xavier<Scalar>(rng, static_cast<Eigen::Index>(num_users), static_cast<Eigen::Index>(dim), d, d));
  t.items = Parameter<Scalar>(xavier<Scalar>(rng, static_cast<Eigen::Index>(num_items), static_cast<Eigen::Index>(dim), d, d));
  return t;
}

template <typename Scalar>
Model<Scalar> init_model(std::size_t num_users, std::size_t num_items, const ModelConfig& config,
                         std::uint64_t rng_seed) {
  config.validate();
  Model<Scalar> model;
  model.config = config;
  model.table = init_embeddings<Scalar>(num_users, num_items, config.embedding_dim, rng_seed);
  const auto d = static_cast<Eigen::Index>(config.embedding_dim);
  const auto fd = static_cast<double>(d);
  for (std::size_t k = 0; k < config.num_layers && config.has_ablation_params(); ++k) {
    auto rng = make_stream(rng_seed, {tag(StreamTag::kInit), k + 1});
    if (config.aggregator == Aggregator::kLightGatMlp) {
      model.extra.blocks.emplace_back(xavier<Scalar>(rng, d, d, fd, fd));
      model.extra.blocks.emplace_back(xavier<Scalar>(rng, 1, 2 * d, 2 * fd, 1.0));
    } else {
      model.extra.blocks.emplace_back(xavier<Scalar>(rng, d, d, fd, fd));
      model.extra.blocks.emplace_back(xavier<Scalar>(rng, d, d, fd, fd));
    }
  }
  return model;
}

namespace {

/// Per-side view of one aggregation: destinations gather from sources.
template <typename Scalar>
struct SideInputs {
  const Adjacency* adj = nullptr;      // destination -> sources
  const Adjacency* src_adj = nullptr;  // sources' own lists in this layer
  const Matrix<Scalar>* src = nullptr;  // source features (attention inputs and messages)
  const Matrix<Scalar>* dst = nullptr;  // destination features
  const Vector<Scalar>* dst_score = nullptr;
  const Vector<Scalar>* src_score = nullptr;
  Vector<Scalar> inv_norm;  // 1 / max(|src row|, eps)
};

template <typename Scalar>
Vector<Scalar> inverse_norms(const Matrix<Scalar>& m, double epsilon) {
  const Scalar eps = static_cast<Scalar>(epsilon);
  Vector<Scalar> out(m.rows());
  for (Eigen::Index r = 0; r < m.rows(); ++r) out[r] = Scalar(1) / std::max(m.row(r).norm(), eps);
  return out;
}

/// Unit rows of the neighbors and their Gram matrix.
template <typename Scalar>
void neighbor_gram(const Matrix<Scalar>& src, const Vector<Scalar>& inv_norm, std::span<const NodeId> nb,
                   Matrix<Scalar>& unit, Matrix<Scalar>& gram) {
  const auto n = static_cast<Eigen::Index>(nb.size());
  unit.resize(n, src.cols());
  for (Eigen::Index j = 0; j < n; ++j) unit.row(j) = src.row(nb[j]) * inv_norm[nb[j]];
  gram.resize(n, n);
  gram.noalias() = unit * unit.transpose();
}

template <typename Scalar>
void ngat_alpha(const Matrix<Scalar>& gram, bool exclude_self, std::span<Scalar> alpha) {
  const auto n = gram.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar sum = exclude_self ? Scalar(0) : Scalar(1);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) sum += std::clamp(gram(i, j), Scalar(0), Scalar(1));
    }
    alpha[static_cast<std::size_t>(i)] = sum / static_cast<Scalar>(n);
  }
}

template <typename Scalar>
Scalar leaky_relu(Scalar x) {
  return x > Scalar(0) ? x : static_cast<Scalar>(kLeakyReluSlope) * x;
}

template <typename Scalar>
void softmax_inplace(std::span<Scalar> z) {
  const Scalar mx = *std::max_element(z.begin(), z.end());
  Scalar total = 0;
  for (Scalar& v : z) {
    v = std::exp(v - mx);
    total += v;
  }
  for (Scalar& v : z) v /= total;
}

template <typename Scalar>
struct Workspace {
  Matrix<Scalar> unit, gram, d_unit, d_gram;
};

template <typename Scalar>
void compute_alpha(const SideInputs<Scalar>& in, const ModelConfig& cfg, std::size_t x, std::span<const NodeId> nb,
                   std::span<Scalar> alpha, Workspace<Scalar>& ws) {
  const std::size_t n = nb.size();
  switch (cfg.aggregator) {
    case Aggregator::kNgat:
    case Aggregator::kNgatNonlinear:
      neighbor_gram(*in.src, in.inv_norm, nb, ws.unit, ws.gram);
      ngat_alpha(ws.gram, cfg.exclude_self_pairs, alpha);
      break;
    case Aggregator::kLightGatDp: {
      const Scalar inv_sqrt_d = Scalar(1) / std::sqrt(static_cast<Scalar>(cfg.embedding_dim));
      for (std::size_t j = 0; j < n; ++j) alpha[j] = in.dst->row(x).dot(in.src->row(nb[j])) * inv_sqrt_d;
      softmax_inplace(alpha);
      break;
    }
    case Aggregator::kLightGatMlp:
      for (std::size_t j = 0; j < n; ++j) alpha[j] = leaky_relu((*in.dst_score)[x] + (*in.src_score)[nb[j]]);
      softmax_inplace(alpha);
      break;
    case Aggregator::kLightGcnMean:
      for (std::size_t j = 0; j < n; ++j) {
        const auto deg = std::max<std::size_t>(1, in.src_adj->degree(nb[j]));
        alpha[j] = Scalar(1) / std::sqrt(static_cast<Scalar>(deg));
      }
      break;
  }
}

template <typename Scalar>
void aggregate_side(const SideInputs<Scalar>& in, const ModelConfig& cfg, Matrix<Scalar>& out,
                    std::vector<Scalar>& alpha) {
  const Adjacency& adj = *in.adj;
  out.setZero(static_cast<Eigen::Index>(adj.num_nodes()), in.src->cols());
  alpha.assign(adj.num_edges(), Scalar(0));
  Workspace<Scalar> ws;
  for (std::size_t x = 0; x < adj.num_nodes(); ++x) {
    auto nb = adj.neighbors(x);
    if (nb.empty()) continue;  // isolated: zero vector at this layer
    std::span<Scalar> a(alpha.data() + adj.offsets[x], nb.size());
    compute_alpha(in, cfg, x, nb, a, ws);
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(nb.size()));
    auto row = out.row(static_cast<Eigen::Index>(x));
    for (std::size_t j = 0; j < nb.size(); ++j) row += (a[j] * scale) * in.src->row(nb[j]);
  }
}

template <typename Scalar>
struct SideGrads {
  Matrix<Scalar>* d_src = nullptr;
  Matrix<Scalar>* d_dst = nullptr;
  Vector<Scalar>* d_dst_score = nullptr;
  Vector<Scalar>* d_src_score = nullptr;
};

template <typename Scalar>
void aggregate_side_backward(const SideInputs<Scalar>& in, const ModelConfig& cfg, const Matrix<Scalar>& d_out,
                             const std::vector<Scalar>& alpha, bool through_attention,
                             SideGrads<Scalar> g) {
  const Adjacency& adj = *in.adj;
  const Matrix<Scalar>& src = *in.src;
  Workspace<Scalar> ws;
  std::vector<Scalar> d_alpha;
  const bool attention_has_inputs = cfg.aggregator != Aggregator::kLightGcnMean && through_attention;

  for (std::size_t x = 0; x < adj.num_nodes(); ++x) {
    auto nb = adj.neighbors(x);
    const auto xr = static_cast<Eigen::Index>(x);
    if (nb.empty()) continue;
    const auto dy = d_out.row(xr);
    if ((dy.array() == Scalar(0)).all()) continue;
    const std::size_t n = nb.size();
    const Scalar* a = alpha.data() + adj.offsets[x];
    const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(n));

    for (std::size_t j = 0; j < n; ++j) g.d_src->row(nb[j]) += (a[j] * scale) * dy;
    if (!attention_has_inputs) continue;

    d_alpha.resize(n);
    for (std::size_t j = 0; j < n; ++j) d_alpha[j] = scale * dy.dot(src.row(nb[j]));

    switch (cfg.aggregator) {
      case Aggregator::kNgat:
      case Aggregator::kNgatNonlinear: {
        neighbor_gram(src, in.inv_norm, nb, ws.unit, ws.gram);
        const auto nn = static_cast<Eigen::Index>(n);
        const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
        ws.d_gram.setZero(nn, nn);
        for (Eigen::Index i = 0; i < nn; ++i) {
          for (Eigen::Index j = 0; j < nn; ++j) {
            const Scalar c = ws.gram(i, j);
            if (i != j && c > Scalar(0) && c < Scalar(1)) ws.d_gram(i, j) = (d_alpha[i] + d_alpha[j]) * inv_n;
          }
        }
        ws.d_unit.noalias() = ws.d_gram * ws.unit;
        const Scalar eps = static_cast<Scalar>(cfg.epsilon);
        for (Eigen::Index j = 0; j < nn; ++j) {
          const NodeId s = nb[static_cast<std::size_t>(j)];
          const Scalar inv = in.inv_norm[s];
          auto du = ws.d_unit.row(j);
          if (Scalar(1) / inv > eps) {
            auto u = ws.unit.row(j);
            g.d_src->row(s) += (du - u * u.dot(du)) * inv;
          } else {
            g.d_src->row(s) += du * inv;
          }
        }
        break;
      }
      case Aggregator::kLightGatDp:
      case Aggregator::kLightGatMlp: {
        Scalar weighted = 0;
        for (std::size_t j = 0; j < n; ++j) weighted += a[j] * d_alpha[j];
        const Scalar inv_sqrt_d = Scalar(1) / std::sqrt(static_cast<Scalar>(cfg.embedding_dim));
        for (std::size_t j = 0; j < n; ++j) {
          const Scalar dz = a[j] * (d_alpha[j] - weighted);
          if (cfg.aggregator == Aggregator::kLightGatDp) {
            g.d_dst->row(xr) += (dz * inv_sqrt_d) * src.row(nb[j]);
            g.d_src->row(nb[j]) += (dz * inv_sqrt_d) * in.dst->row(xr);
          } else {
            const Scalar pre = (*in.dst_score)[xr] + (*in.src_score)[nb[j]];
            const Scalar dpre = dz * (pre > Scalar(0) ? Scalar(1) : static_cast<Scalar>(kLeakyReluSlope));
            (*g.d_dst_score)[xr] += dpre;
            (*g.d_src_score)[nb[j]] += dpre;
          }
        }
        break;
      }
      case Aggregator::kLightGcnMean:
        break;
    }
  }
}

/// Layer-local derived tensors, rebuilt identically by forward and backward.
template <typename Scalar>
struct LayerContext {
  Matrix<Scalar> user_feat, item_feat;  // ngat_nonlinear: ReLU(pre-activation)
  Matrix<Scalar> user_proj, item_proj;  // lightgat_mlp: e W^T
  Vector<Scalar> q_dst_user, q_src_user, q_dst_item, q_src_item;
  SideInputs<Scalar> user_side, item_side;
};

template <typename Scalar>
void build_context(const Model<Scalar>& model, const BipartiteAdjacency& g, std::size_t k,
                   const Matrix<Scalar>& xu, const Matrix<Scalar>& xi, const Matrix<Scalar>* user_preact,
                   const Matrix<Scalar>* item_preact, LayerContext<Scalar>& ctx) {
  const ModelConfig& cfg = model.config;
  const Matrix<Scalar>* user_src = &xu;
  const Matrix<Scalar>* item_src = &xi;
  if (cfg.aggregator == Aggregator::kNgatNonlinear) {
    ctx.user_feat = user_preact->cwiseMax(Scalar(0));
    ctx.item_feat = item_preact->cwiseMax(Scalar(0));
    user_src = &ctx.user_feat;
    item_src = &ctx.item_feat;
  }
  if (cfg.aggregator == Aggregator::kLightGatMlp) {
    const Matrix<Scalar>& w = model.extra.first(k);
    const Matrix<Scalar>& att = model.extra.second(k);
    const auto d = static_cast<Eigen::Index>(cfg.embedding_dim);
    ctx.user_proj.noalias() = xu * w.transpose();
    ctx.item_proj.noalias() = xi * w.transpose();
    ctx.q_dst_user = ctx.user_proj * att.leftCols(d).transpose();
    ctx.q_src_user = ctx.user_proj * att.rightCols(d).transpose();
    ctx.q_dst_item = ctx.item_proj * att.leftCols(d).transpose();
    ctx.q_src_item = ctx.item_proj * att.rightCols(d).transpose();
  }

  auto& us = ctx.user_side;
  us.adj = &g.user_items;
  us.src_adj = &g.item_users;
  us.src = item_src;
  us.dst = &xu;
  us.dst_score = &ctx.q_dst_user;
  us.src_score = &ctx.q_src_item;

  auto& is = ctx.item_side;
  is.adj = &g.item_users;
  is.src_adj = &g.user_items;
  is.src = user_src;
  is.dst = &xi;
  is.dst_score = &ctx.q_dst_item;
  is.src_score = &ctx.q_src_user;

  if (cfg.aggregator == Aggregator::kNgat || cfg.aggregator == Aggregator::kNgatNonlinear) {
    us.inv_norm = inverse_norms(*item_src, cfg.epsilon);
    is.inv_norm = inverse_norms(*user_src, cfg.epsilon);
  }
}

template <typename Scalar>
void check_shapes(const Model<Scalar>& model, const LayerGraphs& layers) {
  const ModelConfig& cfg = model.config;
  if (layers.size() != cfg.num_layers) {
    throw std::invalid_argument("expected " + std::to_string(cfg.num_layers) + " layer graphs, got " +
                                std::to_string(layers.size()));
  }
  if (model.table.dim() != cfg.embedding_dim) throw std::invalid_argument("embedding table width != embedding_dim");
  for (const auto& ref : layers) {
    const BipartiteAdjacency& g = ref.get();
    if (g.num_users() != model.table.num_users() || g.num_items() != model.table.num_items()) {
      throw std::invalid_argument("layer graph does not match embedding table dimensions");
    }
  }
  const std::size_t want_blocks = cfg.has_ablation_params() ? 2 * cfg.num_layers : 0;
  if (model.extra.blocks.size() != want_blocks) throw std::invalid_argument("ablation parameters do not match variant");
}

}  // namespace

template <typename Scalar>
Vector<Scalar> attention_coefficients(const Matrix<Scalar>& features, std::span<const NodeId> neighbors,
                                      double epsilon, bool exclude_self_pairs) {
  if (neighbors.empty()) throw std::invalid_argument("attention_coefficients needs at least one neighbor");
  Matrix<Scalar> unit, gram;
  neighbor_gram(features, inverse_norms(features, epsilon), neighbors, unit, gram);
  Vector<Scalar> alpha(static_cast<Eigen::Index>(neighbors.size()));
  ngat_alpha(gram, exclude_self_pairs, std::span<Scalar>(alpha.data(), neighbors.size()));
  return alpha;
}

template <typename Scalar>
LayerActivations<Scalar> forward(const Model<Scalar>& model, const LayerGraphs& layers) {
  check_shapes(model, layers);
  const ModelConfig& cfg = model.config;
  const std::size_t K = cfg.num_layers;
  LayerActivations<Scalar> acts;
  acts.users.reserve(K + 1);
  acts.items.reserve(K + 1);
  acts.users.push_back(model.table.users.value);
  acts.items.push_back(model.table.items.value);
  acts.user_alpha.resize(K);
  acts.item_alpha.resize(K);

  for (std::size_t k = 0; k < K; ++k) {
    const Matrix<Scalar>& xu = acts.users[k];
    const Matrix<Scalar>& xi = acts.items[k];
    if (cfg.aggregator == Aggregator::kNgatNonlinear) {
      acts.user_preact.push_back(xu * model.extra.first(k).transpose());
      acts.item_preact.push_back(xi * model.extra.second(k).transpose());
    }
    LayerContext<Scalar> ctx;
    build_context(model, layers[k].get(), k, xu, xi,
                  acts.user_preact.empty() ? nullptr : &acts.user_preact[k],
                  acts.item_preact.empty() ? nullptr : &acts.item_preact[k], ctx);
    Matrix<Scalar> next_users, next_items;
    aggregate_side(ctx.user_side, cfg, next_users, acts.user_alpha[k]);
    aggregate_side(ctx.item_side, cfg, next_items, acts.item_alpha[k]);
    acts.users.push_back(std::move(next_users));
    acts.items.push_back(std::move(next_items));
  }
  acts.final_users = combine_layers<Scalar>(acts.users);
  acts.final_items = combine_layers<Scalar>(acts.items);
  return acts;
}

template <typename Scalar>
Gradients<Scalar> Gradients<Scalar>::zeros_like(const Model<Scalar>& model) {
  Gradients<Scalar> g;
  g.users.setZero(model.table.users.value.rows(), model.table.users.value.cols());
  g.items.setZero(model.table.items.value.rows(), model.table.items.value.cols());
  for (const auto& b : model.extra.blocks) g.blocks.push_back(Matrix<Scalar>::Zero(b.value.rows(), b.value.cols()));
  return g;
}

template <typename Scalar>
Gradients<Scalar> backward(const Model<Scalar>& model, const LayerGraphs& layers, const LayerActivations<Scalar>& acts,
                           const Matrix<Scalar>& d_final_users, const Matrix<Scalar>& d_final_items,
                           BackwardOptions options) {
  check_shapes(model, layers);
  const ModelConfig& cfg = model.config;
  const std::size_t K = cfg.num_layers;
  if (acts.users.size() != K + 1 || acts.items.size() != K + 1 || acts.user_alpha.size() != K) {
    throw std::logic_error("backward: activations do not match the model depth");
  }
  Gradients<Scalar> grads = Gradients<Scalar>::zeros_like(model);
  const auto d = static_cast<Eigen::Index>(cfg.embedding_dim);
  const auto nu = d_final_users.rows();
  const auto ni = d_final_items.rows();

  // Running gradient with respect to e^(k); every layer also receives dL/de*.
  Matrix<Scalar> du = d_final_users;
  Matrix<Scalar> di = d_final_items;

  for (std::size_t k = K; k-- > 0;) {
    const Matrix<Scalar>& xu = acts.users[k];
    const Matrix<Scalar>& xi = acts.items[k];
    LayerContext<Scalar> ctx;
    build_context(model, layers[k].get(), k, xu, xi,
                  acts.user_preact.empty() ? nullptr : &acts.user_preact[k],
                  acts.item_preact.empty() ? nullptr : &acts.item_preact[k], ctx);

    Matrix<Scalar> d_user_src = Matrix<Scalar>::Zero(nu, d);
    Matrix<Scalar> d_item_src = Matrix<Scalar>::Zero(ni, d);
    Matrix<Scalar> d_user_dst = Matrix<Scalar>::Zero(nu, d);
    Matrix<Scalar> d_item_dst = Matrix<Scalar>::Zero(ni, d);
    Vector<Scalar> dq_dst_user = Vector<Scalar>::Zero(nu), dq_src_user = Vector<Scalar>::Zero(nu);
    Vector<Scalar> dq_dst_item = Vector<Scalar>::Zero(ni), dq_src_item = Vector<Scalar>::Zero(ni);

    aggregate_side_backward<Scalar>(ctx.user_side, cfg, du, acts.user_alpha[k], options.through_attention,
                                    {&d_item_src, &d_user_dst, &dq_dst_user, &dq_src_item});
    aggregate_side_backward<Scalar>(ctx.item_side, cfg, di, acts.item_alpha[k], options.through_attention,
                                    {&d_user_src, &d_item_dst, &dq_dst_item, &dq_src_user});

    Matrix<Scalar> prev_u = d_final_users;
    Matrix<Scalar> prev_i = d_final_items;
    switch (cfg.aggregator) {
      case Aggregator::kNgatNonlinear: {
        const Matrix<Scalar>& wu = model.extra.first(k);
        const Matrix<Scalar>& wi = model.extra.second(k);
        Matrix<Scalar> dzu = (acts.user_preact[k].array() > Scalar(0)).select(d_user_src, Scalar(0));
        Matrix<Scalar> dzi = (acts.item_preact[k].array() > Scalar(0)).select(d_item_src, Scalar(0));
        prev_u.noalias() += dzu * wu;
        prev_i.noalias() += dzi * wi;
        grads.blocks[2 * k].noalias() += dzu.transpose() * xu;
        grads.blocks[2 * k + 1].noalias() += dzi.transpose() * xi;
        break;
      }
      case Aggregator::kLightGatMlp: {
        prev_u += d_user_src;
        prev_i += d_item_src;
        const Matrix<Scalar>& w = model.extra.first(k);
        const Matrix<Scalar>& att = model.extra.second(k);
        const RowVector<Scalar> a_dst = att.leftCols(d);
        const RowVector<Scalar> a_src = att.rightCols(d);
        Matrix<Scalar> d_user_proj = dq_dst_user * a_dst + dq_src_user * a_src;
        Matrix<Scalar> d_item_proj = dq_dst_item * a_dst + dq_src_item * a_src;
        grads.blocks[2 * k + 1].leftCols(d) +=
            dq_dst_user.transpose() * ctx.user_proj + dq_dst_item.transpose() * ctx.item_proj;
        grads.blocks[2 * k + 1].rightCols(d) +=
            dq_src_user.transpose() * ctx.user_proj + dq_src_item.transpose() * ctx.item_proj;
        grads.blocks[2 * k].noalias() += d_user_proj.transpose() * xu + d_item_proj.transpose() * xi;
        prev_u.noalias() += d_user_proj * w;
        prev_i.noalias() += d_item_proj * w;
        break;
      }
      case Aggregator::kLightGatDp:
        prev_u += d_user_src + d_user_dst;
        prev_i += d_item_src + d_item_dst;
        break;
      case Aggregator::kNgat:
      case Aggregator::kLightGcnMean:
        prev_u += d_user_src;
        prev_i += d_item_src;
        break;
    }
    du = std::move(prev_u);
    di = std::move(prev_i);
  }
  grads.users = std::move(du);
  grads.items = std::move(di);
  return grads;
}

#define NGAT_INSTANTIATE(Scalar)                                                                                    \
  template EmbeddingTable<Scalar> init_embeddings<Scalar>(std::size_t, std::size_t, std::size_t, std::uint64_t);  \
  template Model<Scalar> init_model<Scalar>(std::size_t, std::size_t, const ModelConfig&, std::uint64_t);          \
  template Vector<Scalar> attention_coefficients<Scalar>(const Matrix<Scalar>&, std::span<const NodeId>, double,  \
                                                         bool);                                                    \
  template LayerActivations<Scalar> forward<Scalar>(const Model<Scalar>&, const LayerGraphs&);                    \
  template struct Gradients<Scalar>;                                                                               \
  template Gradients<Scalar> backward<Scalar>(const Model<Scalar>&, const LayerGraphs&,                           \
                                              const LayerActivations<Scalar>&, const Matrix<Scalar>&,             \
                                              const Matrix<Scalar>&, BackwardOptions);

NGAT_INSTANTIATE(float)
NGAT_INSTANTIATE(double)

#undef NGAT_INSTANTIATE

}  // namespace ngat
