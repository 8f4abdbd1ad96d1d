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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "binary_io.hpp"
#include "ngat/rng.hpp"

namespace ngat {

std::size_t Adjacency::max_degree() const {
  std::size_t best = 0;
  for (std::size_t n = 0; n < num_nodes(); ++n) best = std::max(best, degree(n));
  return best;
}

Adjacency Adjacency::from_lists(const std::vector<std::vector<NodeId>>& lists) {
  Adjacency adj;
  adj.offsets.reserve(lists.size() + 1);
  for (const auto& l : lists) {
    adj.indices.insert(adj.indices.end(), l.begin(), l.end());
    adj.offsets.push_back(adj.indices.size());
  }
  return adj;
}

Adjacency Adjacency::transpose(std::size_t num_targets) const {
  Adjacency t;
  t.offsets.assign(num_targets + 1, 0);
  for (NodeId j : indices) {
    if (j >= num_targets) throw GraphError("adjacency index out of range during transpose");
    ++t.offsets[j + 1];
  }
  for (std::size_t j = 0; j < num_targets; ++j) t.offsets[j + 1] += t.offsets[j];
  t.indices.resize(indices.size());
  std::vector<std::uint64_t> cursor(t.offsets.begin(), t.offsets.end() - 1);
  // Rows are visited in ascending order, so every transposed list is sorted.
  for (std::size_t n = 0; n < num_nodes(); ++n) {
    for (NodeId j : neighbors(n)) t.indices[cursor[j]++] = static_cast<NodeId>(n);
  }
  return t;
}

InputFormat parse_input_format(const std::string& name) {
  if (name == "pairs") return InputFormat::kPairs;
  if (name == "adjacency") return InputFormat::kAdjacency;
  throw std::invalid_argument("unknown input format '" + name + "' (expected pairs or adjacency)");
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::uint64_t parse_id(std::string_view token, std::size_t line) {
  std::int64_t value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(line, "malformed integer '" + std::string(token) + "'");
  }
  if (value < 0) throw ParseError(line, "negative id " + std::to_string(value));
  return static_cast<std::uint64_t>(value);
}

std::vector<std::string_view> tokenize(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

LoadResult load_interactions(std::istream& in, InputFormat format) {
  LoadResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (format == InputFormat::kPairs) {
      if (tokens.size() != 2) {
        throw ParseError(lineno, "expected 'user item', got " + std::to_string(tokens.size()) + " fields");
      }
      result.edges.push_back({parse_id(tokens[0], lineno), parse_id(tokens[1], lineno)});
    } else {
      const std::uint64_t user = parse_id(tokens[0], lineno);
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        result.edges.push_back({user, parse_id(tokens[t], lineno)});
      }
    }
  }
  result.num_lines = lineno;
  const std::size_t raw = result.edges.size();
  std::sort(result.edges.begin(), result.edges.end());
  result.edges.erase(std::unique(result.edges.begin(), result.edges.end()), result.edges.end());
  result.num_duplicates = raw - result.edges.size();
  if (result.edges.empty()) result.warnings.push_back("input contains no interactions; graph is empty");
  return result;
}

LoadResult load_interactions(const std::filesystem::path& path, InputFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_interactions(in, format);
}

DenseEdges densify(const EdgeList& edges) {
  DenseEdges out;
  for (const Edge& e : edges) {
    out.ids.users.push_back(e.user);
    out.ids.items.push_back(e.item);
  }
  for (auto* ids : {&out.ids.users, &out.ids.items}) {
    std::sort(ids->begin(), ids->end());
    ids->erase(std::unique(ids->begin(), ids->end()), ids->end());
  }
  auto dense = [](const std::vector<std::uint64_t>& ids, std::uint64_t id) {
    return static_cast<std::uint64_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  out.edges.reserve(edges.size());
  for (const Edge& e : edges) out.edges.push_back({dense(out.ids.users, e.user), dense(out.ids.items, e.item)});
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  return out;
}

DenseEdges apply_k_core(const EdgeList& edges, std::size_t k) {
  if (k < 1) throw std::invalid_argument("k-core threshold must be >= 1");
  const DenseEdges dense = densify(edges);
  const std::size_t nu = dense.num_users();
  const std::size_t ni = dense.num_items();

  std::vector<std::vector<NodeId>> user_items(nu), item_users(ni);
  for (const Edge& e : dense.edges) {
    user_items[e.user].push_back(static_cast<NodeId>(e.item));
    item_users[e.item].push_back(static_cast<NodeId>(e.user));
  }
  std::vector<std::size_t> user_deg(nu), item_deg(ni);
  std::vector<bool> user_dead(nu, false), item_dead(ni, false);
  // Queue entries: (side, node).
  std::queue<std::pair<Side, NodeId>> pending;
  for (std::size_t u = 0; u < nu; ++u) {
    user_deg[u] = user_items[u].size();
    if (user_deg[u] < k) {
      user_dead[u] = true;
      pending.push({Side::kUser, static_cast<NodeId>(u)});
    }
  }
  for (std::size_t i = 0; i < ni; ++i) {
    item_deg[i] = item_users[i].size();
    if (item_deg[i] < k) {
      item_dead[i] = true;
      pending.push({Side::kItem, static_cast<NodeId>(i)});
    }
  }
  while (!pending.empty()) {
    auto [side, node] = pending.front();
    pending.pop();
    if (side == Side::kUser) {
      for (NodeId i : user_items[node]) {
        if (item_dead[i]) continue;
        if (--item_deg[i] < k) {
          item_dead[i] = true;
          pending.push({Side::kItem, i});
        }
      }
    } else {
      for (NodeId u : item_users[node]) {
        if (user_dead[u]) continue;
        if (--user_deg[u] < k) {
          user_dead[u] = true;
          pending.push({Side::kUser, u});
        }
      }
    }
  }

  EdgeList kept;
  for (const Edge& e : dense.edges) {
    if (!user_dead[e.user] && !item_dead[e.item]) {
      kept.push_back({dense.ids.users[e.user], dense.ids.items[e.item]});
    }
  }
  if (kept.empty()) {
    throw GraphError("graph vanished under k-core (k=" + std::to_string(k) + ")");
  }
  return densify(kept);
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  }
  if (!(validation_fraction_of_train > 0.0 && validation_fraction_of_train < 1.0)) {
    throw std::invalid_argument("validation_fraction_of_train must lie in (0, 1)");
  }
}

InteractionGraph make_graph(std::size_t num_users, std::size_t num_items,
                            const std::vector<std::vector<NodeId>>& train,
                            const std::vector<std::vector<NodeId>>& val,
                            const std::vector<std::vector<NodeId>>& test) {
  auto normalized = [&](const std::vector<std::vector<NodeId>>& lists) {
    std::vector<std::vector<NodeId>> out(num_users);
    if (!lists.empty() && lists.size() != num_users) throw GraphError("per-user list count does not match num_users");
    for (std::size_t u = 0; u < lists.size(); ++u) {
      out[u] = lists[u];
      std::sort(out[u].begin(), out[u].end());
      out[u].erase(std::unique(out[u].begin(), out[u].end()), out[u].end());
      if (!out[u].empty() && out[u].back() >= num_items) throw GraphError("item id out of range");
    }
    return out;
  };
  InteractionGraph g;
  g.num_users = num_users;
  g.num_items = num_items;
  g.train.user_items = Adjacency::from_lists(normalized(train));
  g.train.item_users = g.train.user_items.transpose(num_items);
  g.val_pos = Adjacency::from_lists(normalized(val));
  g.test_pos = Adjacency::from_lists(normalized(test));
  return g;
}

InteractionGraph split(const DenseEdges& edges, const SplitSpec& spec) {
  spec.validate();
  const std::size_t nu = edges.num_users();
  std::vector<std::vector<NodeId>> per_user(nu);
  for (const Edge& e : edges.edges) per_user[e.user].push_back(static_cast<NodeId>(e.item));

  std::vector<std::vector<NodeId>> train(nu), val(nu), test(nu);
  for (std::size_t u = 0; u < nu; ++u) {
    auto items = per_user[u];
    std::sort(items.begin(), items.end());
    const std::size_t deg = items.size();
    if (deg < 2) {
      train[u] = items;
      continue;
    }
    auto rng = make_stream(spec.rng_seed, {tag(StreamTag::kSplit), u});
    std::shuffle(items.begin(), items.end(), rng);

    // The small bias guards against 0.8 * 10 landing just below 8.
    auto portion = [](double fraction, std::size_t n) {
      return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
    };
    const std::size_t n_train = std::max<std::size_t>(1, portion(spec.train_fraction, deg));
    std::size_t n_val = portion(spec.validation_fraction_of_train, n_train);
    if (n_train >= 2) n_val = std::max<std::size_t>(1, n_val);
    n_val = std::min(n_val, n_train - 1);

    train[u].assign(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(n_train - n_val));
    val[u].assign(items.begin() + static_cast<std::ptrdiff_t>(n_train - n_val),
                  items.begin() + static_cast<std::ptrdiff_t>(n_train));
    test[u].assign(items.begin() + static_cast<std::ptrdiff_t>(n_train), items.end());
  }
  return make_graph(nu, edges.num_items(), train, val, test);
}

namespace {

constexpr char kGraphMagic[4] = {'N', 'G', 'I', 'G'};

void put_section(detail::ByteWriter& w, const Adjacency& adj) {
  for (std::size_t n = 0; n < adj.num_nodes(); ++n) {
    w.put(static_cast<std::uint32_t>(adj.degree(n)));
    for (NodeId id : adj.neighbors(n)) w.put(static_cast<std::uint32_t>(id));
  }
}

std::vector<std::vector<NodeId>> get_section(detail::ByteReader& r, std::size_t num_users, std::size_t num_items) {
  std::vector<std::vector<NodeId>> lists(num_users);
  for (auto& l : lists) {
    const auto len = r.get<std::uint32_t>();
    if (len > r.remaining() / 4) throw GraphError("graph snapshot: adjacency length exceeds file size");
    l.resize(len);
    for (auto& id : l) {
      id = r.get<std::uint32_t>();
      if (id >= num_items) throw GraphError("graph snapshot: item id out of range");
    }
  }
  return lists;
}

}  // namespace

void write_snapshot(std::ostream& out, const InteractionGraph& graph) {
  detail::ByteWriter w;
  w.put_raw(kGraphMagic, 4);
  w.put(kGraphSnapshotVersion);
  w.put(static_cast<std::uint32_t>(graph.num_users));
  w.put(static_cast<std::uint32_t>(graph.num_items));
  put_section(w, graph.train.user_items);
  put_section(w, graph.val_pos);
  put_section(w, graph.test_pos);
  w.write_to(out);
}

void write_snapshot(const std::filesystem::path& path, const InteractionGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_snapshot(out, graph);
}

InteractionGraph read_snapshot(std::istream& in) {
  auto r = detail::ByteReader::from_stream(in);
  if (r.get_string(4) != std::string(kGraphMagic, 4)) throw GraphError("not a graph snapshot (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kGraphSnapshotVersion) {
    throw GraphError("unsupported graph snapshot version " + std::to_string(version));
  }
  const std::size_t nu = r.get<std::uint32_t>();
  const std::size_t ni = r.get<std::uint32_t>();
  auto train = get_section(r, nu, ni);
  auto val = get_section(r, nu, ni);
  auto test = get_section(r, nu, ni);
  if (r.remaining() != 0) throw GraphError("graph snapshot: trailing bytes");
  return make_graph(nu, ni, train, val, test);
}

InteractionGraph read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_snapshot(in);
}

void write_id_map(const std::filesystem::path& path, const std::vector<std::uint64_t>& ids) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t i = 0; i < ids.size(); ++i) out << i << ' ' << ids[i] << '\n';
}

}  // namespace ngat
