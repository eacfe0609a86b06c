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

// Remaining-length special tokens: arithmetic, rendering and stream parsing.
//
// A token with major x and minor y claims that stride * x + y units remain.
// The default wire format is <|len:w:2:5|>; tokens whose minor is zero use
// the compact form <|len:w:2|>.

#ifndef LENCTL_TOKEN_HPP_
#define LENCTL_TOKEN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lenctl/text.hpp"

namespace lenctl {

struct SpecialToken {
  LengthUnit unit = LengthUnit::kWord;
  std::uint32_t major = 0;
  std::uint32_t minor = 0;

  friend bool operator==(const SpecialToken&, const SpecialToken&) = default;
};

// stride * major + minor. Throws kMalformedToken when minor >= stride and
// kConfig when stride < 1.
std::int64_t remaining(const SpecialToken& token, int stride);

// The token announcing `units_left` remaining units: major = units_left /
// stride, minor = units_left % stride.
SpecialToken token_for_remaining(LengthUnit unit, std::int64_t units_left,
                                 int stride);

// Unit index at which each protocol token is placed for a stream announcing
// \`effective\` units: the opening token at index 0, one token after
// (effective % stride) units unless that is zero, then one every \`stride\`
// units, ending with the terminator at index \`effective\`.
struct ScheduledToken {
  std::int64_t index = 0;
  SpecialToken token;
};
std::vector<ScheduledToken> placement_schedule(LengthUnit unit,
                                               std::int64_t effective,
                                               int stride);

struct TokenRendering {
  std::string full_template = "<|len:{unit}:{major}:{minor}|>";
  std::string compact_template = "<|len:{unit}:{major}|>";

  // Throws kConfig if either template is unusable: missing placeholders,
  // whitespace, adjacent placeholders, or a form that does not parse back.
  void check() const;

  friend bool operator==(const TokenRendering&, const TokenRendering&) = default;
};

std::string render(const SpecialToken& token,
                   const TokenRendering& rendering = {});

struct TokenHit {
  SpecialToken token;
  std::size_t offset = 0;           // in the input text
  std::size_t length = 0;           // rendered byte length
  std::size_t stripped_offset = 0;  // where the token sat in the stripped text
};

struct ParsedStream {
  std::vector<TokenHit> tokens;
  std::string stripped;
};

// Extracts every rendered token left to right. Anything that starts like a
// token but does not complete one is a kParse error carrying its offset.
ParsedStream parse_stream(std::string_view text,
                          const TokenRendering& rendering = {});

inline std::string strip_tokens(std::string_view text,
                                const TokenRendering& rendering = {}) {
  return parse_stream(text, rendering).stripped;
}

}  // namespace lenctl

#endif  // LENCTL_TOKEN_HPP_
