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
#include <initializer_list>
#include <random>

namespace ngat {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a tuple of
/// counters, so results never depend on the order streams are consumed in.
inline std::uint64_t stream_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t c : counters) h = mix64(h ^ mix64(c));
  return h;
}

using Rng = std::mt19937_64;

inline Rng make_stream(std::uint64_t base, std::initializer_list<std::uint64_t> counters) {
  return Rng(stream_seed(base, counters));
}

// Stream tags keep the consumers of one base seed apart.
enum class StreamTag : std::uint64_t {
  kSplit = 1,
  kSampler = 2,
  kInit = 3,
  kShuffle = 4,
  kNegatives = 5,
  kSynthetic = 6,
};

inline std::uint64_t tag(StreamTag t) { return static_cast<std::uint64_t>(t); }

}  // namespace ngat
