/* Copyright 2026 The lenctl Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LENCTL_RANDOM_HPP_
#define LENCTL_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace lenctl {

// Independent streams derived from one user seed, so that changing how many
// draws one stage makes never shifts another stage.
enum class RngStream : std::uint32_t {
  kResidual = 1,
  kMix = 2,
  kRuleFollower = 3,
  kNgram = 4,
  kSynthetic = 5,
  kTest = 6,
};

inline std::mt19937_64 seeded_engine(std::uint64_t seed, RngStream stream,
                                     std::uint64_t salt = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(salt),
                    static_cast<std::uint32_t>(salt >> 32)};
  return std::mt19937_64(seq);
}

// FNV-1a; stable across platforms, used to derive per-record seeds from ids.
constexpr std::uint64_t stable_hash(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace lenctl

#endif  // LENCTL_RANDOM_HPP_
