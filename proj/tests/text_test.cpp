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

#include <random>
#include <string>

#include <gtest/gtest.h>

#include "lenctl/error.hpp"
#include "lenctl/text.hpp"

namespace lenctl {
namespace {

TEST(SegmentTest, WordsAreWhitespaceRuns) {
  EXPECT_EQ(count_units("", LengthUnit::kWord), 0u);
  EXPECT_EQ(count_units("   \t\n", LengthUnit::kWord), 0u);
  EXPECT_EQ(count_units("one", LengthUnit::kWord), 1u);
  EXPECT_EQ(count_units("  one,two  three. ", LengthUnit::kWord), 2u);
  EXPECT_EQ(count_units("don't stop-me now", LengthUnit::kWord), 3u);
  // U+3000 ideographic space separates words.
  EXPECT_EQ(count_units("a\xE3\x80\x80" "b", LengthUnit::kWord), 2u);
  // U+00A0 no-break space separates words too.
  EXPECT_EQ(count_units("a\xC2\xA0" "b", LengthUnit::kWord), 2u);
}

TEST(SegmentTest, SpansPointAtWords) {
  const std::string text = " ab  cd\ne ";
  const Segmentation seg = segment(text, LengthUnit::kWord);
  ASSERT_EQ(seg.count(), 3u);
  EXPECT_EQ(seg.spans[0], (Span{1, 3}));
  EXPECT_EQ(seg.spans[1], (Span{5, 7}));
  EXPECT_EQ(seg.spans[2], (Span{8, 9}));
}

TEST(SegmentTest, SentencesCloseOnTerminators) {
  EXPECT_EQ(count_units("Hi. Bye now.", LengthUnit::kSentence), 2u);
  EXPECT_EQ(count_units("Really?! Yes.", LengthUnit::kSentence), 2u);
  EXPECT_EQ(count_units("He said \"stop.\" Then left.", LengthUnit::kSentence), 2u);
  EXPECT_EQ(count_units("no terminator at all", LengthUnit::kSentence), 1u);
  EXPECT_EQ(count_units("", LengthUnit::kSentence), 0u);
}

TEST(SegmentTest, AbbreviationsDoNotCloseSentences) {
  EXPECT_EQ(count_units("Mr. Smith met Dr. Jones in the U.S. today.", LengthUnit::kSentence),
            1u);
  SegmenterOptions options;
  options.abbreviations.clear();
  const Segmenter plain(options);
  EXPECT_EQ(plain.count("Mr. Smith left.", LengthUnit::kSentence), 2u);
}

TEST(SegmentTest, CharactersAreNonSpaceCodePoints) {
  EXPECT_EQ(count_units("ab c", LengthUnit::kCharacter), 3u);
  EXPECT_EQ(count_units("caf\xC3\xA9", LengthUnit::kCharacter), 4u);
  EXPECT_EQ(count_units("\xF0\x9F\x98\x80 x", LengthUnit::kCharacter), 2u);
}

TEST(SegmentTest, TokenUnitNeedsAdapter) {
  try {
    count_units("abc", LengthUnit::kToken);
    FAIL() << "expected kConfig";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

class SplitEveryByte : public TokenizerAdapter {
 public:
  std::vector<Span> spans(std::string_view text) const override {
    std::vector<Span> out;
    for (std::size_t i = 0; i < text.size(); ++i) out.push_back({i, i + 1});
    return out;
  }
};

TEST(SegmentTest, TokenUnitUsesAdapter) {
  SegmenterOptions options;
  options.tokenizer = std::make_shared<SplitEveryByte>();
  const Segmenter seg(options);
  EXPECT_EQ(seg.count("abcd", LengthUnit::kToken), 4u);
}

TEST(InsertTest, MarkerBindsToNextUnit) {
  const std::string text = "one two three";
  EXPECT_EQ(insert_at_unit_boundary(text, LengthUnit::kWord, 0, "<m>"), "<m>one two three");
  EXPECT_EQ(insert_at_unit_boundary(text, LengthUnit::kWord, 1, "<m>"), "one <m>two three");
  EXPECT_EQ(insert_at_unit_boundary(text, LengthUnit::kWord, 3, "<m>"), "one two three<m>");
}

TEST(InsertTest, OutOfRangeIsBoundaryError) {
  try {
    insert_at_unit_boundary("a b", LengthUnit::kWord, 3, "<m>");
    FAIL() << "expected kBoundary";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kBoundary);
  }
}

TEST(InsertTest, RemovingMarkerRestoresTextForAnyIndex) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "ab .\n";
  for (int round = 0; round < 500; ++round) {
    std::string text;
    const int len = static_cast<int>(rng() % 30);
    for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    const std::size_t n = count_units(text, LengthUnit::kWord);
    const std::size_t index = rng() % (n + 1);
    const std::string marked = insert_at_unit_boundary(text, LengthUnit::kWord, index, "#");
    const std::size_t at = marked.find('#');
    ASSERT_NE(at, std::string::npos);
    std::string restored = marked;
    restored.erase(at, 1);
    EXPECT_EQ(restored, text);
    EXPECT_EQ(count_units(marked.substr(0, at), LengthUnit::kWord), index);
  }
}

TEST(TruncateTest, KeepsLeadingUnits) {
  const Segmenter seg;
  EXPECT_EQ(truncate_units("a b c d", seg, LengthUnit::kWord, 2), "a b");
  EXPECT_EQ(truncate_units("a b", seg, LengthUnit::kWord, 5), "a b");
  EXPECT_EQ(truncate_units("One. Two. Three.", seg, LengthUnit::kSentence, 2), "One. Two.");
}

TEST(Utf8Test, Validation) {
  EXPECT_TRUE(utf8::is_valid("plain"));
  EXPECT_TRUE(utf8::is_valid("\xE2\x82\xAC"));
  EXPECT_FALSE(utf8::is_valid("\xFF"));
  EXPECT_FALSE(utf8::is_valid("\xC0\xAF"));  // overlong
  EXPECT_FALSE(utf8::is_valid("\xED\xA0\x80"));  // surrogate
  EXPECT_EQ(utf8::first_invalid("ok\xE2\x82"), 2u);
}

TEST(UnitNames, RoundTrip) {
  for (LengthUnit u : {LengthUnit::kWord, LengthUnit::kSentence, LengthUnit::kCharacter,
                       LengthUnit::kToken}) {
    EXPECT_EQ(parse_unit(unit_name(u)), u);
    EXPECT_EQ(parse_unit(unit_code(u)), u);
  }
  EXPECT_FALSE(parse_unit("paragraph").has_value());
}

}  // namespace
}  // namespace lenctl
