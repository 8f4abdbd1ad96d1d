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

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ngat/graph_io.hpp"
#include "ngat/model.hpp"
#include "ngat/rng.hpp"
#include "ngat/sampler.hpp"

namespace ngat {

enum class LossForm {
  kStandardBpr,   // softplus(y_uj - y_ui) == -ln sigmoid(y_ui - y_uj)
  kLiteral,       // -softplus(y_ui - y_uj); unbounded below, for fidelity experiments
};

std::string to_string(LossForm form);
LossForm parse_loss_form(const std::string& name);

struct TrainConfig {
  double learning_rate = 0.0005;
  std::size_t batch_size = 8192;
  double l2_lambda = 1e-4;
  std::size_t max_epochs = 400;
  std::size_t eval_every = 10;
  std::size_t early_stop_patience = 5;
  std::uint64_t rng_seed = 0;
  LossForm loss_form = LossForm::kStandardBpr;
  // Test hook: run the loop without ever touching the parameters.
  bool update_parameters = true;

  void validate() const;
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triple {
  NodeId user;
  NodeId pos;
  NodeId neg;
  bool operator==(const Triple&) const = default;
};

struct MiniBatch {
  std::vector<Triple> triples;
  std::size_t skipped = 0;  // positives whose user has no unobserved item
};

using UserItem = std::pair<NodeId, NodeId>;

/// All training edges in a per-(seed, epoch) shuffled order.
std::vector<UserItem> shuffled_train_edges(const InteractionGraph& graph, std::uint64_t rng_seed, std::uint64_t epoch);

/// Uniform item outside the user's training positives, by rejection; nullopt
/// when the user has interacted with every item.
std::optional<NodeId> sample_negative(const InteractionGraph& graph, NodeId user, Rng& rng);

/// Pairs each positive with one sampled negative.
MiniBatch sample_batch(const InteractionGraph& graph, std::span<const UserItem> positives, Rng& rng);

inline double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }
inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Mean pairwise ranking loss over the batch plus lambda * reg_sq_norm.
template <typename Scalar>
double bpr_loss(std::span<const Scalar> pos_scores, std::span<const Scalar> neg_scores, double lambda,
                double reg_sq_norm, LossForm form);

template <typename Scalar>
struct BatchObjective {
  double loss = 0.0;            // ranking + regularization
  double ranking = 0.0;
  double regularization = 0.0;
  Gradients<Scalar> grads;      // empty when not requested
};

/// Forward pass over `layers`, BPR loss of the batch, and (optionally) the
/// exact gradient. The L2 term covers the distinct layer-0 rows named by
/// the batch plus every ablation parameter.
template <typename Scalar>
BatchObjective<Scalar> batch_objective(const Model<Scalar>& model, const LayerGraphs& layers,
                                       std::span<const Triple> batch, double lambda, LossForm form,
                                       bool with_gradient = true);

struct AdamConfig {
  double learning_rate = 0.0005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Bias-corrected Adam on every entry of `param` with step index `step` (1-based).
template <typename Scalar>
void adam_update_dense(Parameter<Scalar>& param, const Matrix<Scalar>& grad, std::int64_t step, const AdamConfig& cfg);

/// Same update restricted to the listed rows; other rows keep their values and moments.
template <typename Scalar>
void adam_update_rows(Parameter<Scalar>& param, const Matrix<Scalar>& grad, std::span<const Eigen::Index> rows,
                      std::int64_t step, const AdamConfig& cfg);

/// One optimizer step: increments the step counter, updates embedding rows
/// with a nonzero gradient and every ablation block.
template <typename Scalar>
void adam_step(Model<Scalar>& model, const Gradients<Scalar>& grads, const AdamConfig& cfg);

struct HistoryEntry {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_recall20 = 0.0;
  double val_ndcg20 = 0.0;
  double wall_seconds = 0.0;
};

std::string history_line(const HistoryEntry& entry);

struct TrainResult {
  Model<float> best;  // parameters at the best validation recall@20
  Model<float> last;
  std::size_t best_epoch = 0;
  std::vector<HistoryEntry> history;  // one entry per evaluation
  std::vector<double> epoch_losses;   // mean training objective of every epoch
  bool stopped_early = false;
};

struct TrainHooks {
  std::function<void(const HistoryEntry&)> on_evaluation;
};

TrainResult train(const InteractionGraph& graph, Model<float> initial, const TrainConfig& train_config,
                  const SamplerConfig& sampler_config, const TrainHooks& hooks = {});

TrainResult train(const InteractionGraph& graph, const ModelConfig& model_config, const TrainConfig& train_config,
                  const SamplerConfig& sampler_config, const TrainHooks& hooks = {});

}  // namespace ngat
