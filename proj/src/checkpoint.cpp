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

#include "ngat/checkpoint.hpp"

#include <bit>
#include <fstream>

#include <zlib.h>

#include "binary_io.hpp"

namespace ngat {

namespace {

constexpr char kMagic[4] = {'N', 'G', 'A', 'T'};
constexpr std::uint8_t kExcludeSelfBit = 0x80;

std::uint32_t crc_of(const unsigned char* data, std::size_t n) {
  return static_cast<std::uint32_t>(crc32(crc32(0L, Z_NULL, 0), data, static_cast<uInt>(n)));
}

void put_matrix(detail::ByteWriter& w, const Matrix<float>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) w.put(std::bit_cast<std::uint32_t>(m(r, c)));
  }
}

Matrix<float> get_matrix(detail::ByteReader& r, Eigen::Index rows, Eigen::Index cols) {
  Matrix<float> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = std::bit_cast<float>(r.get<std::uint32_t>());
  }
  return m;
}

}  // namespace

std::uint8_t variant_tag(const ModelConfig& config) {
  auto t = static_cast<std::uint8_t>(config.aggregator);
  if (config.exclude_self_pairs) t |= kExcludeSelfBit;
  return t;
}

void write_checkpoint(std::ostream& out, const Model<float>& model) {
  const ModelConfig& cfg = model.config;
  detail::ByteWriter w;
  w.put_raw(kMagic, 4);
  w.put(kCheckpointVersion);
  w.put(static_cast<std::uint32_t>(model.table.num_users()));
  w.put(static_cast<std::uint32_t>(model.table.num_items()));
  w.put(static_cast<std::uint32_t>(cfg.embedding_dim));
  w.put(static_cast<std::uint32_t>(cfg.num_layers));
  w.put(variant_tag(cfg));
  put_matrix(w, model.table.users.value);
  put_matrix(w, model.table.items.value);
  for (const auto& b : model.extra.blocks) put_matrix(w, b.value);
  const auto crc = crc_of(w.bytes().data(), w.bytes().size());
  w.put(crc);
  w.write_to(out);
}

void write_checkpoint(const std::filesystem::path& path, const Model<float>& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path.string());
  write_checkpoint(out, model);
}

Model<float> read_checkpoint(std::istream& in) {
  auto r = detail::ByteReader::from_stream(in);
  if (r.bytes().size() < 4 + 4 * 5 + 1 + 4) throw CheckpointError("checkpoint truncated");
  const std::size_t body = r.bytes().size() - 4;
  std::uint32_t stored_crc = 0;
  for (int b = 3; b >= 0; --b) stored_crc = (stored_crc << 8) | r.bytes()[body + static_cast<std::size_t>(b)];
  if (crc_of(r.bytes().data(), body) != stored_crc) throw CheckpointError("checkpoint CRC mismatch");

  if (r.get_string(4) != std::string(kMagic, 4)) throw CheckpointError("not a checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  const auto nu = static_cast<Eigen::Index>(r.get<std::uint32_t>());
  const auto ni = static_cast<Eigen::Index>(r.get<std::uint32_t>());
  Model<float> model;
  model.config.embedding_dim = r.get<std::uint32_t>();
  model.config.num_layers = r.get<std::uint32_t>();
  const auto tag = r.get<std::uint8_t>();
  const auto agg = static_cast<std::uint8_t>(tag & ~kExcludeSelfBit);
  if (agg > static_cast<std::uint8_t>(Aggregator::kLightGcnMean)) {
    throw CheckpointError("unknown aggregator tag " + std::to_string(agg));
  }
  model.config.aggregator = static_cast<Aggregator>(agg);
  model.config.exclude_self_pairs = (tag & kExcludeSelfBit) != 0;
  try {
    model.config.validate();
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("invalid checkpoint header: ") + e.what());
  }

  const auto d = static_cast<Eigen::Index>(model.config.embedding_dim);
  const auto expect = static_cast<std::size_t>((nu + ni) * d) * 4;
  if (r.remaining() < expect + 4) throw CheckpointError("checkpoint truncated");
  model.table.users = Parameter<float>(get_matrix(r, nu, d));
  model.table.items = Parameter<float>(get_matrix(r, ni, d));
  for (std::size_t k = 0; k < model.config.num_layers && model.config.has_ablation_params(); ++k) {
    model.extra.blocks.emplace_back(get_matrix(r, d, d));
    if (model.config.aggregator == Aggregator::kLightGatMlp) {
      model.extra.blocks.emplace_back(get_matrix(r, 1, 2 * d));
    } else {
      model.extra.blocks.emplace_back(get_matrix(r, d, d));
    }
  }
  if (r.remaining() != 4) throw CheckpointError("checkpoint size does not match its header");
  return model;
}

Model<float> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace ngat
