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

#include "ngat/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "ngat/evaluator.hpp"

namespace ngat {

std::string to_string(LossForm form) {
  return form == LossForm::kStandardBpr ? "standard_bpr" : "paper_literal";
}

LossForm parse_loss_form(const std::string& name) {
  if (name == "standard_bpr") return LossForm::kStandardBpr;
  if (name == "paper_literal") return LossForm::kLiteral;
  throw std::invalid_argument("unknown loss_form '" + name + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
  if (!(l2_lambda >= 0.0)) throw std::invalid_argument("l2_lambda must be >= 0");
  if (eval_every == 0) throw std::invalid_argument("eval_every must be positive");
  if (early_stop_patience == 0) throw std::invalid_argument("early_stop_patience must be positive");
}

std::vector<UserItem> shuffled_train_edges(const InteractionGraph& graph, std::uint64_t rng_seed,
                                           std::uint64_t epoch) {
  std::vector<UserItem> edges;
  edges.reserve(graph.num_train_edges());
  const Adjacency& adj = graph.train.user_items;
  for (std::size_t u = 0; u < adj.num_nodes(); ++u) {
    for (NodeId i : adj.neighbors(u)) edges.emplace_back(static_cast<NodeId>(u), i);
  }
  auto rng = make_stream(rng_seed, {tag(StreamTag::kShuffle), epoch});
  std::shuffle(edges.begin(), edges.end(), rng);
  return edges;
}

std::optional<NodeId> sample_negative(const InteractionGraph& graph, NodeId user, Rng& rng) {
  auto owned = graph.train.user_items.neighbors(user);
  if (owned.size() >= graph.num_items) return std::nullopt;
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(graph.num_items - 1));
  for (;;) {
    const NodeId j = pick(rng);
    if (!std::binary_search(owned.begin(), owned.end(), j)) return j;
  }
}

MiniBatch sample_batch(const InteractionGraph& graph, std::span<const UserItem> positives, Rng& rng) {
  MiniBatch batch;
  batch.triples.reserve(positives.size());
  for (const auto& [u, i] : positives) {
    if (auto j = sample_negative(graph, u, rng)) {
      batch.triples.push_back({u, i, *j});
    } else {
      ++batch.skipped;
    }
  }
  if (batch.skipped > 0) {
    std::clog << "warning: skipped " << batch.skipped << " positives whose user interacted with every item\n";
  }
  return batch;
}

template <typename Scalar>
double bpr_loss(std::span<const Scalar> pos_scores, std::span<const Scalar> neg_scores, double lambda,
                double reg_sq_norm, LossForm form) {
  if (pos_scores.size() != neg_scores.size()) throw std::invalid_argument("bpr_loss: score spans differ in length");
  if (pos_scores.empty()) return lambda * reg_sq_norm;
  double total = 0.0;
  for (std::size_t t = 0; t < pos_scores.size(); ++t) {
    const double margin = static_cast<double>(pos_scores[t]) - static_cast<double>(neg_scores[t]);
    total += form == LossForm::kStandardBpr ? softplus(-margin) : -softplus(margin);
  }
  return total / static_cast<double>(pos_scores.size()) + lambda * reg_sq_norm;
}

namespace {

std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

template <typename Scalar>
BatchObjective<Scalar> batch_objective(const Model<Scalar>& model, const LayerGraphs& layers,
                                       std::span<const Triple> batch, double lambda, LossForm form,
                                       bool with_gradient) {
  const auto acts = forward(model, layers);
  const Matrix<Scalar>& fu = acts.final_users;
  const Matrix<Scalar>& fi = acts.final_items;
  const std::size_t n = batch.size();

  std::vector<Scalar> pos(n), neg(n);
  for (std::size_t t = 0; t < n; ++t) {
    pos[t] = predict(batch[t].user, batch[t].pos, fu, fi);
    neg[t] = predict(batch[t].user, batch[t].neg, fu, fi);
  }

  std::vector<NodeId> users, items;
  for (const Triple& t : batch) {
    users.push_back(t.user);
    items.push_back(t.pos);
    items.push_back(t.neg);
  }
  users = sorted_unique(std::move(users));
  items = sorted_unique(std::move(items));
  const auto& eu = model.table.users.value;
  const auto& ei = model.table.items.value;
  double reg = 0.0;
  for (NodeId u : users) reg += static_cast<double>(eu.row(u).squaredNorm());
  for (NodeId i : items) reg += static_cast<double>(ei.row(i).squaredNorm());
  for (const auto& b : model.extra.blocks) reg += static_cast<double>(b.value.squaredNorm());

  BatchObjective<Scalar> out;
  out.loss = bpr_loss<Scalar>(pos, neg, lambda, reg, form);
  out.regularization = lambda * reg;
  out.ranking = out.loss - out.regularization;
  if (!with_gradient) return out;

  Matrix<Scalar> d_fu = Matrix<Scalar>::Zero(fu.rows(), fu.cols());
  Matrix<Scalar> d_fi = Matrix<Scalar>::Zero(fi.rows(), fi.cols());
  const double inv_n = n == 0 ? 0.0 : 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double margin = static_cast<double>(pos[t]) - static_cast<double>(neg[t]);
    // Both forms have dL/dmargin = -sigmoid(+/-margin) / |B|.
    const double s = form == LossForm::kStandardBpr ? sigmoid(-margin) : sigmoid(margin);
    const auto g_pos = static_cast<Scalar>(-s * inv_n);
    const auto g_neg = static_cast<Scalar>(s * inv_n);
    const Triple& tr = batch[t];
    d_fu.row(tr.user) += g_pos * fi.row(tr.pos) + g_neg * fi.row(tr.neg);
    d_fi.row(tr.pos) += g_pos * fu.row(tr.user);
    d_fi.row(tr.neg) += g_neg * fu.row(tr.user);
  }

  out.grads = backward(model, layers, acts, d_fu, d_fi);
  const auto two_lambda = static_cast<Scalar>(2.0 * lambda);
  if (lambda > 0.0) {
    for (NodeId u : users) out.grads.users.row(u) += two_lambda * eu.row(u);
    for (NodeId i : items) out.grads.items.row(i) += two_lambda * ei.row(i);
    for (std::size_t b = 0; b < model.extra.blocks.size(); ++b) {
      out.grads.blocks[b] += two_lambda * model.extra.blocks[b].value;
    }
  }
  return out;
}

namespace {

template <typename Scalar>
struct AdamScales {
  Scalar lr_corrected;  // lr / (1 - beta1^t), folded with sqrt(1 - beta2^t)
  Scalar eps_corrected;
};

template <typename Scalar>
AdamScales<Scalar> adam_scales(std::int64_t step, const AdamConfig& cfg) {
  const double t = static_cast<double>(step);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);
  // lr * mhat / (sqrt(vhat) + eps) == (lr * sqrt(bc2) / bc1) * m / (sqrt(v) + eps * sqrt(bc2))
  return {static_cast<Scalar>(cfg.learning_rate * std::sqrt(bc2) / bc1),
          static_cast<Scalar>(cfg.epsilon * std::sqrt(bc2))};
}

template <typename RowM, typename RowV, typename RowG, typename RowP, typename Scalar>
void adam_row(RowP&& p, RowM&& m, RowV&& v, const RowG& g, const AdamConfig& cfg, const AdamScales<Scalar>& s) {
  const auto b1 = static_cast<Scalar>(cfg.beta1);
  const auto b2 = static_cast<Scalar>(cfg.beta2);
  m = b1 * m + (Scalar(1) - b1) * g;
  v = b2 * v + (Scalar(1) - b2) * g.cwiseProduct(g);
  p.array() -= s.lr_corrected * m.array() / (v.array().sqrt() + s.eps_corrected);
}

}  // namespace

template <typename Scalar>
void adam_update_dense(Parameter<Scalar>& param, const Matrix<Scalar>& grad, std::int64_t step,
                       const AdamConfig& cfg) {
  if (grad.rows() != param.value.rows() || grad.cols() != param.value.cols()) {
    throw std::invalid_argument("adam: gradient shape mismatch");
  }
  const auto s = adam_scales<Scalar>(step, cfg);
  adam_row(param.value, param.m, param.v, grad, cfg, s);
  if (!param.value.allFinite()) throw TrainingError("adam: non-finite parameter after update");
}

template <typename Scalar>
void adam_update_rows(Parameter<Scalar>& param, const Matrix<Scalar>& grad, std::span<const Eigen::Index> rows,
                      std::int64_t step, const AdamConfig& cfg) {
  if (grad.rows() != param.value.rows() || grad.cols() != param.value.cols()) {
    throw std::invalid_argument("adam: gradient shape mismatch");
  }
  const auto s = adam_scales<Scalar>(step, cfg);
  for (Eigen::Index r : rows) {
    adam_row(param.value.row(r), param.m.row(r), param.v.row(r), grad.row(r), cfg, s);
    if (!param.value.row(r).allFinite()) {
      throw TrainingError("adam: non-finite parameter in row " + std::to_string(r));
    }
  }
}

template <typename Scalar>
void adam_step(Model<Scalar>& model, const Gradients<Scalar>& grads, const AdamConfig& cfg) {
  const std::int64_t step = ++model.table.step;
  auto nonzero_rows = [](const Matrix<Scalar>& g) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      if (!(g.row(r).array() == Scalar(0)).all()) rows.push_back(r);
    }
    return rows;
  };
  adam_update_rows(model.table.users, grads.users, nonzero_rows(grads.users), step, cfg);
  adam_update_rows(model.table.items, grads.items, nonzero_rows(grads.items), step, cfg);
  for (std::size_t b = 0; b < model.extra.blocks.size(); ++b) {
    adam_update_dense(model.extra.blocks[b], grads.blocks[b], step, cfg);
  }
}

std::string history_line(const HistoryEntry& e) {
  nlohmann::ordered_json j;
  j["epoch"] = e.epoch;
  j["train_loss"] = e.train_loss;
  j["val_recall20"] = e.val_recall20;
  j["val_ndcg20"] = e.val_ndcg20;
  j["wall_seconds"] = e.wall_seconds;
  return j.dump();
}

TrainResult train(const InteractionGraph& graph, Model<float> model, const TrainConfig& tc, const SamplerConfig& sc,
                  const TrainHooks& hooks) {
  tc.validate();
  model.config.validate();
  const std::size_t K = model.config.num_layers;
  if (K > 0) sc.validate(K);
  if (graph.num_train_edges() == 0) throw TrainingError("graph has no training edges");
  if (tc.loss_form == LossForm::kLiteral) {
    std::clog << "warning: loss_form=paper_literal is unbounded below; use for fidelity experiments only\n";
  }

  TrainResult result;
  result.best = model;
  if (tc.max_epochs == 0) {
    result.last = std::move(model);
    return result;
  }

  const std::size_t cutoff[] = {20};
  const auto start = std::chrono::steady_clock::now();
  double best_recall = evaluate(model, graph, cutoff, EvalSplit::kValidation).at(20).recall;
  std::size_t stale = 0;
  const AdamConfig adam{tc.learning_rate};

  for (std::size_t epoch = 1; epoch <= tc.max_epochs; ++epoch) {
    SampledSubgraph sub;
    LayerGraphs layers;
    if (K > 0) {
      sub = sample_subgraph(graph, sc, epoch);
      layers = sampled_layers(sub);
    }
    const auto edges = shuffled_train_edges(graph, tc.rng_seed, epoch);
    auto neg_rng = make_stream(tc.rng_seed, {tag(StreamTag::kNegatives), epoch});

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t begin = 0; begin < edges.size(); begin += tc.batch_size) {
      const std::size_t end = std::min(edges.size(), begin + tc.batch_size);
      const auto batch = sample_batch(graph, std::span<const UserItem>(edges).subspan(begin, end - begin), neg_rng);
      if (batch.triples.empty()) continue;
      auto obj = batch_objective<float>(model, layers, batch.triples, tc.l2_lambda, tc.loss_form);
      if (!std::isfinite(obj.loss)) {
        throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) + ", batch " +
                            std::to_string(batches));
      }
      if (tc.update_parameters) adam_step(model, obj.grads, adam);
      loss_sum += obj.loss;
      ++batches;
    }
    const double epoch_loss = batches == 0 ? 0.0 : loss_sum / static_cast<double>(batches);
    result.epoch_losses.push_back(epoch_loss);

    if (epoch % tc.eval_every != 0 && epoch != tc.max_epochs) continue;
    const auto report = evaluate(model, graph, cutoff, EvalSplit::kValidation);
    HistoryEntry entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss;
    entry.val_recall20 = report.at(20).recall;
    entry.val_ndcg20 = report.at(20).ndcg;
    entry.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(entry);
    if (hooks.on_evaluation) hooks.on_evaluation(entry);

    if (entry.val_recall20 > best_recall) {
      best_recall = entry.val_recall20;
      result.best = model;
      result.best_epoch = epoch;
      stale = 0;
    } else if (++stale >= tc.early_stop_patience) {
      result.stopped_early = true;
      break;
    }
  }
  result.last = std::move(model);
  return result;
}

TrainResult train(const InteractionGraph& graph, const ModelConfig& mc, const TrainConfig& tc,
                  const SamplerConfig& sc, const TrainHooks& hooks) {
  return train(graph, init_model<float>(graph.num_users, graph.num_items, mc, tc.rng_seed), tc, sc, hooks);
}

#define NGAT_INSTANTIATE(Scalar)                                                                                 \
  template double bpr_loss<Scalar>(std::span<const Scalar>, std::span<const Scalar>, double, double, LossForm); \
  template BatchObjective<Scalar> batch_objective<Scalar>(const Model<Scalar>&, const LayerGraphs&,            \
                                                          std::span<const Triple>, double, LossForm, bool);    \
  template void adam_update_dense<Scalar>(Parameter<Scalar>&, const Matrix<Scalar>&, std::int64_t,             \
                                          const AdamConfig&);                                                  \
  template void adam_update_rows<Scalar>(Parameter<Scalar>&, const Matrix<Scalar>&,                            \
                                         std::span<const Eigen::Index>, std::int64_t, const AdamConfig&);      \
  template void adam_step<Scalar>(Model<Scalar>&, const Gradients<Scalar>&, const AdamConfig&);

NGAT_INSTANTIATE(float)
NGAT_INSTANTIATE(double)

#undef NGAT_INSTANTIATE

}  // namespace ngat
