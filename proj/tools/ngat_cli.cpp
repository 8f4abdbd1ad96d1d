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

// Command-line front end: preprocess, synth, sample-stats, train, eval.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ngat/checkpoint.hpp"
#include "ngat/config.hpp"
#include "ngat/evaluator.hpp"
#include "ngat/graph_io.hpp"
#include "ngat/sampler.hpp"
#include "ngat/synthetic.hpp"
#include "ngat/trainer.hpp"

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct PreprocessArgs {
  std::string input, format = "pairs", out;
  std::size_t k_core = 10;
  double train_frac = 0.8, val_frac = 0.1;
  std::uint64_t seed = 0;
};

int run_preprocess(const PreprocessArgs& a) {
  auto loaded = ngat::load_interactions(fs::path(a.input), ngat::parse_input_format(a.format));
  for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
  std::cerr << "loaded " << loaded.edges.size() << " unique interactions (" << loaded.num_duplicates
            << " duplicates dropped)\n";
  auto filtered = ngat::apply_k_core(loaded.edges, a.k_core);
  auto graph = ngat::split(filtered, {a.train_frac, a.val_frac, a.seed});
  fs::create_directories(a.out);
  ngat::write_snapshot(fs::path(a.out) / "graph.ngig", graph);
  ngat::write_id_map(fs::path(a.out) / "user_ids.txt", filtered.ids.users);
  ngat::write_id_map(fs::path(a.out) / "item_ids.txt", filtered.ids.items);
  nlohmann::ordered_json j;
  j["users"] = graph.num_users;
  j["items"] = graph.num_items;
  j["train_edges"] = graph.num_train_edges();
  j["validation_edges"] = graph.val_pos.num_edges();
  j["test_edges"] = graph.test_pos.num_edges();
  std::cout << j.dump() << '\n';
  return 0;
}

struct SynthArgs {
  ngat::PlantedBlocksSpec spec;
  std::string out;
};

int run_synth(const SynthArgs& a) {
  const auto edges = ngat::generate_planted(a.spec);
  auto out = open_output(a.out);
  for (const auto& e : edges) out << e.user << ' ' << e.item << '\n';
  std::cerr << "wrote " << edges.size() << " interactions to " << a.out << '\n';
  return 0;
}

struct SampleStatsArgs {
  std::string graph, caps = "120,120,120";
  std::uint64_t seed = 0, epoch = 0;
};

int run_sample_stats(const SampleStatsArgs& a) {
  const auto graph = ngat::read_snapshot(fs::path(a.graph));
  ngat::SamplerConfig cfg;
  cfg.max_neighbors_per_hop = ngat::parse_caps(a.caps);
  cfg.rng_seed = a.seed;
  const auto sub = ngat::sample_subgraph(graph, cfg, a.epoch);
  nlohmann::ordered_json j;
  j["train_edges"] = graph.num_train_edges();
  j["epoch"] = a.epoch;
  j["hops"] = nlohmann::ordered_json::array();
  for (std::size_t h = 0; h < sub.hops.size(); ++h) {
    j["hops"].push_back({{"hop", h + 1},
                         {"max_neighbors", cfg.max_neighbors_per_hop[h]},
                         {"user_side_edges", sub.hops[h].user_items.num_edges()},
                         {"item_side_edges", sub.hops[h].item_users.num_edges()}});
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct TrainArgs {
  std::string graph, config, out;
};

int run_train(const TrainArgs& a) {
  const auto graph = ngat::read_snapshot(fs::path(a.graph));
  const auto cfg = ngat::parse_run_config(fs::path(a.config));
  fs::create_directories(a.out);
  std::ofstream history(fs::path(a.out) / "history.jsonl");
  ngat::TrainHooks hooks;
  hooks.on_evaluation = [&](const ngat::HistoryEntry& e) {
    const auto line = ngat::history_line(e);
    history << line << '\n' << std::flush;
    std::cerr << line << '\n';
  };
  const auto result = ngat::train(graph, cfg.model, cfg.train, cfg.sampler, hooks);
  ngat::write_checkpoint(fs::path(a.out) / "checkpoint.ngat", result.best);
  ngat::write_checkpoint(fs::path(a.out) / "last.ngat", result.last);
  std::ofstream(fs::path(a.out) / "config.txt") << ngat::dump_run_config(cfg);
  std::cerr << "best validation recall@20 at epoch " << result.best_epoch
            << (result.stopped_early ? " (early stop)" : "") << '\n';
  return 0;
}

struct EvalArgs {
  std::string checkpoint, graph, split = "test", cutoffs = "20", report;
  bool per_user = false;
};

int run_eval(const EvalArgs& a) {
  const auto graph = ngat::read_snapshot(fs::path(a.graph));
  const auto model = ngat::read_checkpoint(fs::path(a.checkpoint));
  const auto cutoffs = ngat::parse_caps(a.cutoffs);
  const auto report = ngat::evaluate(model, graph, cutoffs, ngat::parse_split(a.split), a.per_user);
  const auto json = ngat::report_to_json(report);
  if (a.report.empty()) {
    std::cout << json << '\n';
  } else {
    auto out = open_output(a.report);
    out << json << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph attention recommender: preprocessing, training, evaluation"};
  app.require_subcommand(1);

  PreprocessArgs pre;
  auto* p = app.add_subcommand("preprocess", "k-core filter, split, and snapshot an interaction file");
  p->add_option("--input", pre.input, "interaction file")->required()->check(CLI::ExistingFile);
  p->add_option("--format", pre.format, "pairs | adjacency")->check(CLI::IsMember({"pairs", "adjacency"}));
  p->add_option("--k-core", pre.k_core, "minimum interactions per user and item");
  p->add_option("--train-frac", pre.train_frac);
  p->add_option("--val-frac", pre.val_frac, "fraction of each user's train items held out for validation");
  p->add_option("--seed", pre.seed);
  p->add_option("--out", pre.out, "output directory")->required();

  SynthArgs syn;
  auto* s = app.add_subcommand("synth", "generate a planted-block interaction file");
  s->add_option("--blocks", syn.spec.num_blocks);
  s->add_option("--users", syn.spec.users_per_block, "users per block");
  s->add_option("--items", syn.spec.items_per_block, "items per block");
  s->add_option("--p-in", syn.spec.in_block_edge_prob);
  s->add_option("--p-cross", syn.spec.cross_block_edge_prob);
  s->add_option("--seed", syn.spec.rng_seed);
  s->add_option("--out", syn.out, "pairs file")->required();

  SampleStatsArgs ss;
  auto* st = app.add_subcommand("sample-stats", "report kept-edge counts of one Max-M sub-graph");
  st->add_option("--graph", ss.graph)->required()->check(CLI::ExistingFile);
  st->add_option("--max-neighbors", ss.caps, "comma-separated cap per hop");
  st->add_option("--seed", ss.seed);
  st->add_option("--epoch", ss.epoch);

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "train a model on a graph snapshot");
  t->add_option("--graph", tr.graph)->required()->check(CLI::ExistingFile);
  t->add_option("--config", tr.config, "key=value config file")->required()->check(CLI::ExistingFile);
  t->add_option("--out", tr.out, "output directory")->required();

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "all-ranking evaluation of a checkpoint");
  e->add_option("--checkpoint", ev.checkpoint)->required()->check(CLI::ExistingFile);
  e->add_option("--graph", ev.graph)->required()->check(CLI::ExistingFile);
  e->add_option("--split", ev.split)->check(CLI::IsMember({"validation", "test"}));
  e->add_option("--cutoffs", ev.cutoffs, "comma-separated cutoffs");
  e->add_option("--report", ev.report, "JSON output path (stdout when omitted)");
  e->add_flag("--per-user", ev.per_user, "include per-user hit ranks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*p) return run_preprocess(pre);
    if (*s) return run_synth(syn);
    if (*st) return run_sample_stats(ss);
    if (*t) return run_train(tr);
    if (*e) return run_eval(ev);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
