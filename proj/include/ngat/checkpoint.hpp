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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>

#include "ngat/model.hpp"

namespace ngat {

// Layout, all little-endian:
//   "NGAT" | u32 version | u32 users | u32 items | u32 d | u32 K | u8 variant tag
//   | f32 user rows | f32 item rows | f32 ablation blocks in layer order | u32 CRC32
// The variant tag holds the aggregator in its low 7 bits; bit 7 marks
// exclude_self_pairs. Adam moments are not persisted.
inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint8_t variant_tag(const ModelConfig& config);

void write_checkpoint(std::ostream& out, const Model<float>& model);
void write_checkpoint(const std::filesystem::path& path, const Model<float>& model);
Model<float> read_checkpoint(std::istream& in);
Model<float> read_checkpoint(const std::filesystem::path& path);

}  // namespace ngat
