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

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lenctl/augmenter.hpp"
#include "lenctl/desk_lm.hpp"
#include "lenctl/error.hpp"
#include "lenctl/token.hpp"
#include "lenctl/validator.hpp"

namespace lenctl {
namespace {

HanselConfig word_config(int stride, int residual_max) {
  HanselConfig c;
  c.units = {{LengthUnit::kWord, stride}};
  c.residual_max = residual_max;
  return c;
}

std::string context_for(std::int64_t target, const HanselConfig& c) {
  return build_inference_context("Some source text.", Task::kSummarization, target,
                                 Framework::kHansel, c);
}

TEST(RuleFollowerTest, StopAtZeroHitsTargetExactly) {
  const HanselConfig c = word_config(20, 0);
  RuleFollowerConfig f;
  f.residual_behavior = ResidualBehavior::kStopAtZero;
  for (std::int64_t target = 1; target <= 120; ++target) {
    const GenerationResult r = rule_follow(context_for(target, c), c, f, 0);
    EXPECT_EQ(count_units(strip_tokens(r.text), LengthUnit::kWord),
              static_cast<std::size_t>(target));
    EXPECT_TRUE(validate(render(token_for_remaining(LengthUnit::kWord, target, 20)) + r.text, c)
                    .ok())
        << r.text;
  }
}

TEST(RuleFollowerTest, FinishSentenceStaysWithinResidual) {
  for (int delta : {1, 3, 5}) {
    const HanselConfig c = word_config(10, delta);
    RuleFollowerConfig f;
    f.residual_behavior = ResidualBehavior::kFinishSentence;
    for (std::int64_t target = 1; target <= 80; ++target) {
      for (std::uint64_t salt = 0; salt < 4; ++salt) {
        const GenerationResult r = rule_follow(context_for(target, c), c, f, salt);
        const auto n = static_cast<std::int64_t>(count_units(strip_tokens(r.text),
                                                             LengthUnit::kWord));
        EXPECT_GE(n, target);
        EXPECT_LE(n - target, delta);
      }
    }
  }
}

TEST(RuleFollowerTest, NeedsOpeningToken) {
  const HanselConfig c = word_config(10, 0);
  try {
    rule_follow("Summarize. Answer in 5 words.", c, {}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kProtocol);
  }
}

TEST(RuleFollowerTest, UsesCorpusLexicon) {
  const std::vector<Example> corpus{{"a", "", "Zebra yak quokka.", Task::kSummarization, {}}};
  const RuleFollowerConfig f = rule_follower_from_corpus(corpus);
  EXPECT_EQ(f.lexicon, (std::vector<std::string>{"quokka", "yak", "zebra"}));
  EXPECT_EQ(f.sentence_lengths, (std::vector<int>{3}));
}

TEST(SyntheticTest, ReferencesHaveExactLength) {
  for (int len = 1; len <= 200; ++len) {
    EXPECT_EQ(count_units(synthetic_reference(len, 1, 2), LengthUnit::kWord),
              static_cast<std::size_t>(len));
  }
  EXPECT_EQ(synthetic_reference(30, 1, 2), synthetic_reference(30, 1, 2));
  EXPECT_NE(synthetic_reference(30, 1, 2), synthetic_reference(30, 1, 3));
}

TEST(SyntheticTest, CorpusShape) {
  SyntheticCorpusOptions o;
  o.size = 400;
  const auto docs = synthetic_corpus(o);
  ASSERT_EQ(docs.size(), 400u);
  int typical = 0;
  for (const Example& d : docs) {
    const auto n = static_cast<int>(count_units(d.reference, LengthUnit::kWord));
    EXPECT_GE(n, o.min_length);
    EXPECT_LE(n, o.max_length);
    typical += n >= o.typical_min && n <= o.typical_max;
  }
  EXPECT_GT(typical, 300);
}

class NgramTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    SyntheticCorpusOptions o;
    o.size = 300;
    const auto docs = synthetic_corpus(o);
    std::vector<AugmentedExample> recs;
    HanselConfig c = word_config(20, 1);
    const auto residuals = assign_residuals(docs, c);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      recs.push_back(augment_hansel(docs[i], c, residuals[i]));
    }
    model_ = new NgramModel(NgramModel::train(recs));
  }
  static void TearDownTestSuite() {
    delete model_;
    model_ = nullptr;
  }
  static NgramModel* model_;
};

NgramModel* NgramTest::model_ = nullptr;

TEST_F(NgramTest, DistributionIsNormalized) {
  const std::vector<std::vector<std::string>> histories{
      {},
      {"<open>"},
      {"<open>", "The"},
      {"never-seen", "tokens"},
      {"<open>", "The", std::string(NgramModel::kKeepSymbol)},
  };
  for (const auto& h : histories) {
    for (Clock clock : {Clock{}, Clock{Clock::Phase::kOpen, 5, 2}, Clock{Clock::Phase::kPeriod, 0, 19},
                        Clock{Clock::Phase::kEnd, 0, 0}}) {
      const auto dist = model_->distribution(h, clock);
      EXPECT_EQ(dist.size(), model_->prediction_size());
      double total = 0.0;
      for (const auto& [symbol, p] : dist) {
        EXPECT_GT(p, 0.0) << symbol;
        total += p;
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

TEST_F(NgramTest, LearnsToEndAfterTerminator) {
  const auto end_p = model_->distribution({}, Clock{Clock::Phase::kEnd, 0, 1}).at("</s>");
  const auto mid_p = model_->distribution({}, Clock{Clock::Phase::kPeriod, 0, 3}).at("</s>");
  EXPECT_GT(end_p, 0.3);
  EXPECT_LT(mid_p, 0.01);
}

TEST_F(NgramTest, JsonRoundTripPreservesBehaviour) {
  const NgramModel copy = NgramModel::from_json(model_->to_json());
  EXPECT_EQ(copy.to_json(), model_->to_json());
  const HanselConfig c = word_config(20, 1);
  const GenerateOptions g{GenerationMode::kFree, 500, 17};
  EXPECT_EQ(copy.generate(context_for(30, c), c, g).text,
            model_->generate(context_for(30, c), c, g).text);
}

TEST_F(NgramTest, RejectsBadModelJson) {
  auto j = model_->to_json();
  j["version"] = 1;
  EXPECT_THROW(NgramModel::from_json(j), Error);
  j = model_->to_json();
  j["events"][0][1][0][0] = 99;
  EXPECT_THROW(NgramModel::from_json(j), Error);
  EXPECT_THROW(NgramModel::from_json(nlohmann::json::object()), Error);
}

TEST_F(NgramTest, AssistedOutputFollowsProtocol) {
  const HanselConfig c = word_config(20, 1);
  for (std::int64_t target : {1, 5, 20, 50, 80, 130}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto r = model_->generate(context_for(target, c), c,
                                      {GenerationMode::kProtocolAssisted, 1722, seed});
      const std::string opening = render(token_for_remaining(LengthUnit::kWord, target, 20));
      const auto verdict = validate(opening + r.text, c);
      EXPECT_TRUE(verdict.ok()) << target << ": " << r.text;
    }
  }
}

TEST_F(NgramTest, FreeModeIsSeedDeterministic) {
  const HanselConfig c = word_config(20, 1);
  const GenerateOptions g{GenerationMode::kFree, 300, 4};
  EXPECT_EQ(model_->generate(context_for(40, c), c, g).text,
            model_->generate(context_for(40, c), c, g).text);
}

TEST_F(NgramTest, CapIsReported) {
  const HanselConfig c = word_config(20, 1);
  const auto r = model_->generate(context_for(130, c), c, {GenerationMode::kFree, 5, 0});
  EXPECT_TRUE(r.hit_cap);
  EXPECT_EQ(count_units(strip_tokens(r.text), LengthUnit::kWord), 5u);
}

TEST(NgramTrainTest, RejectsBadOptions) {
  const std::vector<AugmentedExample> none;
  EXPECT_THROW(NgramModel::train(none), Error);
  AugmentedExample one;
  one.output = "<|len:w:0:1|>x<|len:w:0|>";
  const std::vector<AugmentedExample> recs{one};
  EXPECT_THROW(NgramModel::train(recs, {0, 0.1, 10}), Error);
  EXPECT_THROW(NgramModel::train(recs, {3, 0.0, 10}), Error);
}

}  // namespace
}  // namespace lenctl
