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

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ngat/model.hpp"
#include "ngat/sampler.hpp"
#include "ngat/trainer.hpp"

namespace ngat {

/// Everything `train` needs, read from flat `key = value` lines. Keys match
/// the config struct field names; `sampler_rng_seed` defaults to
/// `rng_seed` and `max_neighbors_per_hop` to 120 per layer.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  SamplerConfig sampler;
};

RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config(const std::filesystem::path& path);
std::string dump_run_config(const RunConfig& config);

}  // namespace ngat
