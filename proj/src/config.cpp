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

#include "ngat/config.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace ngat {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream ss(value);
  T out{};
  ss >> out;
  if (ss.fail() || !ss.eof()) throw std::invalid_argument("config: bad value for " + key + ": '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::optional<std::uint64_t> sampler_seed;
  bool caps_given = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "embedding_dim") cfg.model.embedding_dim = parse_number<std::size_t>(key, value);
    else if (key == "num_layers") cfg.model.num_layers = parse_number<std::size_t>(key, value);
    else if (key == "aggregator_variant") cfg.model.aggregator = parse_aggregator(value);
    else if (key == "epsilon") cfg.model.epsilon = parse_number<double>(key, value);
    else if (key == "exclude_self_pairs") cfg.model.exclude_self_pairs = parse_bool(key, value);
    else if (key == "learning_rate") cfg.train.learning_rate = parse_number<double>(key, value);
    else if (key == "batch_size") cfg.train.batch_size = parse_number<std::size_t>(key, value);
    else if (key == "l2_lambda") cfg.train.l2_lambda = parse_number<double>(key, value);
    else if (key == "max_epochs") cfg.train.max_epochs = parse_number<std::size_t>(key, value);
    else if (key == "eval_every") cfg.train.eval_every = parse_number<std::size_t>(key, value);
    else if (key == "early_stop_patience") cfg.train.early_stop_patience = parse_number<std::size_t>(key, value);
    else if (key == "rng_seed") cfg.train.rng_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "loss_form") cfg.train.loss_form = parse_loss_form(value);
    else if (key == "max_neighbors_per_hop") {
      cfg.sampler.max_neighbors_per_hop = parse_caps(value);
      caps_given = true;
    } else if (key == "sampler_rng_seed") sampler_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "resample_policy") {
      if (value != "per_epoch") throw std::invalid_argument("config: resample_policy supports only per_epoch");
    } else {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.sampler.rng_seed = sampler_seed.value_or(cfg.train.rng_seed);
  if (!caps_given) cfg.sampler.max_neighbors_per_hop.assign(cfg.model.num_layers, 120);
  cfg.model.validate();
  cfg.train.validate();
  if (cfg.model.num_layers > 0) cfg.sampler.validate(cfg.model.num_layers);
  return cfg;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return parse_run_config(in);
}

std::string dump_run_config(const RunConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "embedding_dim=" << c.model.embedding_dim << '\n'
      << "num_layers=" << c.model.num_layers << '\n'
      << "aggregator_variant=" << to_string(c.model.aggregator) << '\n'
      << "epsilon=" << c.model.epsilon << '\n'
      << "exclude_self_pairs=" << (c.model.exclude_self_pairs ? "true" : "false") << '\n'
      << "learning_rate=" << c.train.learning_rate << '\n'
      << "batch_size=" << c.train.batch_size << '\n'
      << "l2_lambda=" << c.train.l2_lambda << '\n'
      << "max_epochs=" << c.train.max_epochs << '\n'
      << "eval_every=" << c.train.eval_every << '\n'
      << "early_stop_patience=" << c.train.early_stop_patience << '\n'
      << "rng_seed=" << c.train.rng_seed << '\n'
      << "loss_form=" << to_string(c.train.loss_form) << '\n'
      << "max_neighbors_per_hop=";
  for (std::size_t h = 0; h < c.sampler.max_neighbors_per_hop.size(); ++h) {
    out << (h ? "," : "") << c.sampler.max_neighbors_per_hop[h];
  }
  out << '\n' << "sampler_rng_seed=" << c.sampler.rng_seed << '\n' << "resample_policy=per_epoch\n";
  return out.str();
}

}  // namespace ngat
