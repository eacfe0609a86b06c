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

#include <cstring>
#include <memory>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lenctl/lenctl.h"
#include "test_util.hpp"

namespace {

using lenctl::testing::ScratchDir;

struct StringDeleter {
  void operator()(char* s) const { lenctl_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct ConfigDeleter {
  void operator()(lenctl_config* c) const { lenctl_config_destroy(c); }
};

class CApiTest : public ::testing::Test {
 protected:
  void SetUp() override {
    lenctl_config* raw = nullptr;
    ASSERT_EQ(lenctl_config_create(&raw), LENCTL_OK);
    config_.reset(raw);
  }
  std::unique_ptr<lenctl_config, ConfigDeleter> config_;
};

TEST(CApiBasics, VersionAndStatusNames) {
  EXPECT_STREQ(lenctl_version(), "0.3.0");
  EXPECT_STREQ(lenctl_status_name(LENCTL_OK), "ok");
  EXPECT_STREQ(lenctl_status_name(LENCTL_ERR_VALIDATION_FAILED), "validation_failed");
  EXPECT_NE(lenctl_status_name(static_cast<lenctl_status>(999)), nullptr);
  lenctl_string_free(nullptr);
}

TEST(CApiBasics, NullArgumentsAreRejected) {
  EXPECT_EQ(lenctl_config_create(nullptr), LENCTL_ERR_INVALID_ARGUMENT);
  EXPECT_STRNE(lenctl_last_error(), "");
  size_t n = 0;
  EXPECT_EQ(lenctl_count_units(nullptr, 3, "word", &n), LENCTL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lenctl_count_units("a b", 3, "word", nullptr), LENCTL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(lenctl_count_units("a b", 3, "word", &n), LENCTL_OK);
  EXPECT_STREQ(lenctl_last_error(), "");
  EXPECT_EQ(n, 2u);
}

TEST(CApiBasics, CountUnitsAndRouge) {
  size_t n = 0;
  const char text[] = "Hi there. Bye now.";
  ASSERT_EQ(lenctl_count_units(text, std::strlen(text), "sentence", &n), LENCTL_OK);
  EXPECT_EQ(n, 2u);
  ASSERT_EQ(lenctl_count_units(text, std::strlen(text), "character", &n), LENCTL_OK);
  EXPECT_EQ(n, 15u);
  EXPECT_EQ(lenctl_count_units(text, std::strlen(text), "paragraph", &n),
            LENCTL_ERR_INVALID_ARGUMENT);
  double f = 0;
  ASSERT_EQ(lenctl_rouge_f1("a b c d", "a x b y d", "rougeL", 0, &f), LENCTL_OK);
  EXPECT_NEAR(f, 2 * 0.75 * 0.6 / 1.35, 1e-12);
  EXPECT_EQ(lenctl_rouge_f1("a", "b", "rouge3", 0, &f), LENCTL_ERR_INVALID_ARGUMENT);
}

TEST_F(CApiTest, ConfigMergeAndHash) {
  char* raw = nullptr;
  ASSERT_EQ(lenctl_config_hash(config_.get(), &raw), LENCTL_OK);
  OwnedString before(raw);
  EXPECT_EQ(std::strlen(before.get()), 64u);
  ASSERT_EQ(lenctl_config_merge_json(config_.get(), R"({"hansel": {"residual_max": 4}})"),
            LENCTL_OK);
  ASSERT_EQ(lenctl_config_hash(config_.get(), &raw), LENCTL_OK);
  OwnedString after(raw);
  EXPECT_STRNE(before.get(), after.get());
  ASSERT_EQ(lenctl_config_to_json(config_.get(), &raw), LENCTL_OK);
  OwnedString dumped(raw);
  EXPECT_EQ(nlohmann::json::parse(dumped.get())["hansel"]["residual_max"], 4);

  EXPECT_EQ(lenctl_config_merge_json(config_.get(), "{oops"), LENCTL_ERR_CONFIG);
  EXPECT_EQ(lenctl_config_merge_json(config_.get(), R"({"bogus": 1})"), LENCTL_ERR_CONFIG);
  // A failed merge leaves the handle untouched.
  ASSERT_EQ(lenctl_config_hash(config_.get(), &raw), LENCTL_OK);
  OwnedString unchanged(raw);
  EXPECT_STREQ(unchanged.get(), after.get());
  EXPECT_EQ(lenctl_config_merge_file(config_.get(), "/nonexistent/cfg.json"), LENCTL_ERR_IO);
}

TEST_F(CApiTest, TokensAndValidation) {
  char* raw = nullptr;
  ASSERT_EQ(lenctl_render_token(config_.get(), "word", 2, 5, &raw), LENCTL_OK);
  OwnedString token(raw);
  EXPECT_STREQ(token.get(), "<|len:w:2:5|>");
  EXPECT_EQ(lenctl_render_token(config_.get(), "word", 1ull << 40, 0, &raw),
            LENCTL_ERR_INVALID_ARGUMENT);

  const std::string text = "<|len:w:0:2|>one two<|len:w:0|>";
  ASSERT_EQ(lenctl_strip_tokens(config_.get(), text.data(), text.size(), &raw), LENCTL_OK);
  OwnedString stripped(raw);
  EXPECT_STREQ(stripped.get(), "one two");

  int ok = 0;
  ASSERT_EQ(lenctl_validate_text(config_.get(), text.data(), text.size(), &ok, &raw), LENCTL_OK);
  OwnedString verdict(raw);
  EXPECT_EQ(ok, 1);
  const std::string bad = "<|len:w:0:3|>one two<|len:w:0|>";
  ASSERT_EQ(lenctl_validate_text(config_.get(), bad.data(), bad.size(), &ok, nullptr), LENCTL_OK);
  EXPECT_EQ(ok, 0);

  ASSERT_EQ(lenctl_inference_context(config_.get(), "Doc.", "summarization", 25, "hansel", &raw),
            LENCTL_OK);
  OwnedString ctx(raw);
  EXPECT_STREQ(ctx.get(), "Doc.\n\nSummarize. Answer in 25 words. <|len:w:1:5|>");
  EXPECT_EQ(lenctl_inference_context(config_.get(), "Doc.", "poetry", 25, "hansel", &raw),
            LENCTL_ERR_INVALID_ARGUMENT);
}

TEST_F(CApiTest, FileOperationsAndErrorLines) {
  ScratchDir dir("capi");
  ASSERT_EQ(lenctl_synth_file((dir / "syn.jsonl").c_str(), 50, 1, "summarization"), LENCTL_OK);
  char* raw = nullptr;
  ASSERT_EQ(lenctl_augment_file(config_.get(), (dir / "syn.jsonl").c_str(),
                                (dir / "aug.jsonl").c_str(), nullptr, &raw),
            LENCTL_OK);
  OwnedString summary(raw);
  EXPECT_EQ(nlohmann::json::parse(summary.get())["records"], 50);
  ASSERT_EQ(lenctl_validate_file(config_.get(), (dir / "aug.jsonl").c_str(), nullptr), LENCTL_OK);

  lenctl::testing::write_text(dir / "broken.jsonl",
                              R"({"id":"a","source":"s","reference":"r","task":"summarization"})"
                              "\n{nope\n");
  EXPECT_EQ(lenctl_augment_file(config_.get(), (dir / "broken.jsonl").c_str(),
                                (dir / "out.jsonl").c_str(), nullptr, nullptr),
            LENCTL_ERR_PARSE);
  EXPECT_EQ(lenctl_last_error_line(), 2u);
  EXPECT_FALSE(std::filesystem::exists(dir / "out.jsonl"));

  EXPECT_EQ(lenctl_stats_file(config_.get(), (dir / "missing.jsonl").c_str(), nullptr, nullptr),
            LENCTL_ERR_IO);
  ASSERT_EQ(lenctl_stats_file(config_.get(), (dir / "syn.jsonl").c_str(), nullptr, &raw),
            LENCTL_OK);
  OwnedString stats(raw);
  EXPECT_EQ(nlohmann::json::parse(stats.get())["count"], 50);

  // Damage one hansel record: validation fails and points at its line.
  auto lines = lenctl::testing::read_lines(dir / "aug.jsonl");
  std::size_t target = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find("\"framework\":\"hansel\"") != std::string::npos) {
      target = i;
      break;
    }
  }
  auto j = nlohmann::json::parse(lines[target]);
  j["output"] = std::string(j["output"]) + " extra words here";
  lines[target] = j.dump();
  std::string text;
  for (const auto& l : lines) text += l + "\n";
  lenctl::testing::write_text(dir / "aug.jsonl", text);
  EXPECT_EQ(lenctl_validate_file(config_.get(), (dir / "aug.jsonl").c_str(), nullptr),
            LENCTL_ERR_VALIDATION_FAILED);
  EXPECT_EQ(lenctl_last_error_line(), target + 1);
}

TEST_F(CApiTest, NgramLifecycle) {
  ScratchDir dir("capi-ngram");
  ASSERT_EQ(lenctl_synth_file((dir / "syn.jsonl").c_str(), 200, 2, "summarization"), LENCTL_OK);
  lenctl_ngram* model = nullptr;
  ASSERT_EQ(lenctl_ngram_train_file(config_.get(), (dir / "syn.jsonl").c_str(), &model),
            LENCTL_OK);
  ASSERT_EQ(lenctl_ngram_save(model, (dir / "m.json").c_str()), LENCTL_OK);
  lenctl_ngram* loaded = nullptr;
  ASSERT_EQ(lenctl_ngram_load((dir / "m.json").c_str(), &loaded), LENCTL_OK);

  char* raw = nullptr;
  ASSERT_EQ(lenctl_inference_context(config_.get(), "Doc.", "summarization", 30, "hansel", &raw),
            LENCTL_OK);
  OwnedString ctx(raw);
  int cap_a = -1, cap_b = -1;
  char* a = nullptr;
  char* b = nullptr;
  ASSERT_EQ(lenctl_ngram_generate(model, config_.get(), ctx.get(), 1, 9, &a, &cap_a), LENCTL_OK);
  ASSERT_EQ(lenctl_ngram_generate(loaded, config_.get(), ctx.get(), 1, 9, &b, &cap_b), LENCTL_OK);
  OwnedString ga(a), gb(b);
  EXPECT_STREQ(ga.get(), gb.get());
  EXPECT_EQ(cap_a, 0);
  EXPECT_EQ(lenctl_ngram_generate(model, config_.get(), "no opening", 1, 9, &a, nullptr),
            LENCTL_ERR_PROTOCOL);
  lenctl_ngram_destroy(model);
  lenctl_ngram_destroy(loaded);
  lenctl_ngram_destroy(nullptr);

  lenctl::testing::write_text(dir / "bad.json", R"({"format": "other"})");
  EXPECT_EQ(lenctl_ngram_load((dir / "bad.json").c_str(), &loaded), LENCTL_ERR_PARSE);
}

}  // namespace
