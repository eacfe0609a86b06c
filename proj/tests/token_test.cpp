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

#include <cstdint>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "lenctl/error.hpp"
#include "lenctl/token.hpp"

namespace lenctl {
namespace {

TEST(TokenTest, DefaultRendering) {
  EXPECT_EQ(render({LengthUnit::kWord, 2, 5}), "<|len:w:2:5|>");
  EXPECT_EQ(render({LengthUnit::kWord, 2, 0}), "<|len:w:2|>");
  EXPECT_EQ(render({LengthUnit::kSentence, 0, 0}), "<|len:s:0|>");
  EXPECT_EQ(render({LengthUnit::kCharacter, 13, 9}), "<|len:c:13:9|>");
}

TEST(TokenTest, RemainingMatchesStrideArithmetic) {
  EXPECT_EQ(remaining({LengthUnit::kWord, 2, 5}, 10), 25);
  EXPECT_EQ(remaining({LengthUnit::kWord, 0, 0}, 10), 0);
  for (std::int64_t left = 0; left < 500; ++left) {
    for (int stride : {1, 3, 10, 20, 40}) {
      EXPECT_EQ(remaining(token_for_remaining(LengthUnit::kWord, left, stride), stride), left);
    }
  }
}

TEST(TokenTest, MinorNotBelowStrideIsMalformed) {
  try {
    remaining({LengthUnit::kWord, 1, 10}, 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kMalformedToken);
  }
}

TEST(ScheduleTest, TwentyFiveWordsStrideTen) {
  const auto s = placement_schedule(LengthUnit::kWord, 25, 10);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].index, 0);
  EXPECT_EQ(s[0].token, (SpecialToken{LengthUnit::kWord, 2, 5}));
  EXPECT_EQ(s[1].index, 5);
  EXPECT_EQ(s[2].index, 15);
  EXPECT_EQ(s[3].index, 25);
  EXPECT_EQ(s[3].token, (SpecialToken{LengthUnit::kWord, 0, 0}));
}

TEST(ScheduleTest, ExactMultipleHasNoDuplicateOpening) {
  const auto s = placement_schedule(LengthUnit::kWord, 20, 10);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].token, (SpecialToken{LengthUnit::kWord, 2, 0}));
  EXPECT_EQ(s[1].index, 10);
  EXPECT_EQ(s[2].index, 20);
}

TEST(ScheduleTest, ZeroLengthIsOnlyTerminator) {
  const auto s = placement_schedule(LengthUnit::kWord, 0, 10);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].token, (SpecialToken{LengthUnit::kWord, 0, 0}));
}

TEST(ScheduleTest, ClaimsMatchUnitsLeftEverywhere) {
  for (std::int64_t len = 0; len <= 200; ++len) {
    for (int stride : {1, 7, 10, 20, 40}) {
      const auto s = placement_schedule(LengthUnit::kWord, len, stride);
      for (const ScheduledToken& t : s) {
        ASSERT_EQ(remaining(t.token, stride), len - t.index) << len << " " << stride;
      }
      ASSERT_EQ(s.back().index, len);
    }
  }
}

TEST(ParseTest, RoundTripsRandomStreams) {
  std::mt19937_64 rng(11);
  const LengthUnit units[] = {LengthUnit::kWord, LengthUnit::kSentence, LengthUnit::kCharacter};
  for (int round = 0; round < 1000; ++round) {
    std::string text, plain;
    std::vector<SpecialToken> expected;
    const int pieces = static_cast<int>(rng() % 8);
    for (int i = 0; i < pieces; ++i) {
      if (rng() % 2) {
        const std::string w = "w" + std::to_string(rng() % 100) + (rng() % 2 ? " " : "");
        text += w;
        plain += w;
      } else {
        SpecialToken t{units[rng() % 3], static_cast<std::uint32_t>(rng() % 50),
                       static_cast<std::uint32_t>(rng() % 3 == 0 ? 0 : rng() % 40)};
        text += render(t);
        expected.push_back(t);
      }
    }
    const ParsedStream parsed = parse_stream(text);
    ASSERT_EQ(parsed.stripped, plain);
    ASSERT_EQ(parsed.tokens.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(parsed.tokens[i].token, expected[i]);
      EXPECT_EQ(text.substr(parsed.tokens[i].offset, parsed.tokens[i].length),
                render(expected[i]));
    }
  }
}

TEST(ParseTest, MalformedTokenReportsOffset) {
  for (const char* bad : {"ok <|len:w:x|> tail", "ok <|len:q:1|>", "ok <|len:w:1:|>",
                          "ok <|len:w:-1|>", "ok <|len:w:1"}) {
    try {
      parse_stream(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kParse) << bad;
      EXPECT_EQ(e.offset(), 3u) << bad;
    }
  }
}

TEST(ParseTest, StripLeavesOrdinaryTextAlone) {
  EXPECT_EQ(strip_tokens("a <| b |> c"), "a <| b |> c");
  EXPECT_EQ(strip_tokens("<|len:w:1|>x<|len:w:0|>"), "x");
}

TEST(RenderingTest, CustomTemplateRoundTrips) {
  TokenRendering r{"[L {unit} {major} {minor}]", "[L {unit} {major}]"};
  EXPECT_THROW(r.check(), Error);  // whitespace is rejected
  r = {"[L_{unit}_{major}_{minor}]", "[L_{unit}_{major}]"};
  EXPECT_NO_THROW(r.check());
  const SpecialToken t{LengthUnit::kWord, 3, 4};
  EXPECT_EQ(render(t, r), "[L_w_3_4]");
  const ParsedStream p = parse_stream("x [L_w_3_4]y", r);
  ASSERT_EQ(p.tokens.size(), 1u);
  EXPECT_EQ(p.tokens[0].token, t);
  EXPECT_EQ(p.stripped, "x y");
}

TEST(RenderingTest, RejectsUnusableTemplates) {
  for (const TokenRendering& r :
       {TokenRendering{"<{unit}{major}:{minor}>", "<{unit}:{major}>"},
        TokenRendering{"<{major}:{minor}>", "<{unit}:{major}>"},
        TokenRendering{"<{unit}:{major}:{minor}>", "<{unit}>"}}) {
    EXPECT_THROW(r.check(), Error) << r.full_template << " " << r.compact_template;
  }
}

}  // namespace
}  // namespace lenctl
