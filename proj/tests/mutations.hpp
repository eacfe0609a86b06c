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

// Single-token mutations of a valid token stream. Every mutation touches
// exactly one special token and leaves the words alone.

#ifndef LENCTL_TESTS_MUTATIONS_HPP_
#define LENCTL_TESTS_MUTATIONS_HPP_

#include <cstddef>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lenctl/text.hpp"
#include "lenctl/token.hpp"

namespace lenctl::testing {

enum class Mutation { kDelete, kDuplicate, kMajorUp, kMajorDown, kMinor, kShift, kUnit };

inline constexpr Mutation kAllMutations[] = {Mutation::kDelete,    Mutation::kDuplicate,
                                             Mutation::kMajorUp,   Mutation::kMajorDown,
                                             Mutation::kMinor,     Mutation::kShift,
                                             Mutation::kUnit};

inline const char* mutation_name(Mutation m) {
  switch (m) {
    case Mutation::kDelete: return "delete";
    case Mutation::kDuplicate: return "duplicate";
    case Mutation::kMajorUp: return "major_up";
    case Mutation::kMajorDown: return "major_down";
    case Mutation::kMinor: return "minor";
    case Mutation::kShift: return "shift";
    case Mutation::kUnit: return "unit";
  }
  return "?";
}

inline void PrintTo(Mutation m, std::ostream* os) { *os << mutation_name(m); }

struct PlacedToken {
  std::size_t word = 0;  // index of the word the token precedes
  SpecialToken token;
};

inline std::vector<PlacedToken> placed_tokens(const ParsedStream& parsed) {
  std::vector<PlacedToken> out;
  for (const TokenHit& hit : parsed.tokens) {
    out.push_back({count_units(std::string_view(parsed.stripped).substr(0, hit.stripped_offset),
                               LengthUnit::kWord),
                   hit.token});
  }
  return out;
}

inline std::string rebuild(const std::string& stripped, const std::vector<PlacedToken>& tokens) {
  const Segmentation seg = segment(stripped, LengthUnit::kWord);
  std::string out;
  std::size_t cursor = 0;
  for (const PlacedToken& t : tokens) {
    const std::size_t at = boundary_offset(seg, stripped.size(), t.word);
    out.append(stripped, cursor, at - cursor);
    cursor = at;
    out += render(t.token);
  }
  out.append(stripped, cursor, std::string::npos);
  return out;
}

// Applies `m` to token `which` of a word-unit stream. `stride` bounds the
// minor value so the mutated token still renders as a well-formed token.
inline std::string mutate(std::string_view text, Mutation m, std::size_t which, int stride) {
  const ParsedStream parsed = parse_stream(text);
  std::vector<PlacedToken> tokens = placed_tokens(parsed);
  const std::size_t words = count_units(parsed.stripped, LengthUnit::kWord);
  PlacedToken& t = tokens.at(which);
  switch (m) {
    case Mutation::kDelete:
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(which));
      break;
    case Mutation::kDuplicate:
      tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(which), t);
      break;
    case Mutation::kMajorUp:
      ++t.token.major;
      break;
    case Mutation::kMajorDown:
      t.token.major = t.token.major > 0 ? t.token.major - 1 : 2;
      break;
    case Mutation::kMinor:
      t.token.minor = stride > 1 ? (t.token.minor + 1) % static_cast<std::uint32_t>(stride)
                                 : t.token.minor + 1;
      break;
    case Mutation::kShift: {
      const std::size_t from = t.word;
      PlacedToken moved = t;
      tokens.erase(tokens.begin() + static_cast<std::ptrdiff_t>(which));
      moved.word = moved.word < words ? moved.word + 1 : moved.word - 1;
      // Keep the list ordered by word position.
      auto pos = tokens.begin();
      while (pos != tokens.end() && pos->word <= moved.word) ++pos;
      if (moved.word < from) {
        pos = tokens.begin();
        while (pos != tokens.end() && pos->word < moved.word) ++pos;
      }
      tokens.insert(pos, moved);
      break;
    }
    case Mutation::kUnit:
      t.token.unit = LengthUnit::kSentence;
      break;
  }
  return rebuild(parsed.stripped, tokens);
}

}  // namespace lenctl::testing

#endif  // LENCTL_TESTS_MUTATIONS_HPP_
