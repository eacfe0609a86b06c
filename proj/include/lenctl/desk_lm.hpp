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

// Desk-scale generators: an exact rule follower that behaves like a
// perfectly trained length-controlled model, and a clock-conditioned n-gram
// model trainable on augmented records.

#ifndef LENCTL_DESK_LM_HPP_
#define LENCTL_DESK_LM_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lenctl/augmenter.hpp"
#include "lenctl/config.hpp"

namespace lenctl {

struct GenerationResult {
  std::string text;  // raw continuation, special tokens included
  bool hit_cap = false;
};

// --- rule follower -------------------------------------------------------

enum class ResidualBehavior { kStopAtZero, kFinishSentence };

struct RuleFollowerConfig {
  std::vector<std::string> lexicon;  // empty: built-in filler vocabulary
  // Sentence lengths are drawn uniformly from `sentence_lengths` when it is
  // non-empty, otherwise uniformly from [sentence_min, sentence_max].
  std::vector<int> sentence_lengths;
  int sentence_min = 4;
  int sentence_max = 14;
  ResidualBehavior residual_behavior = ResidualBehavior::kStopAtZero;
  std::uint64_t seed = 0;
};

// Lexicon (lowercased words with punctuation removed) and sentence lengths
// taken from the references.
RuleFollowerConfig rule_follower_from_corpus(std::span<const Example> corpus,
                                             RuleFollowerConfig base = {});

// Continues a context that ends with a word-unit opening token. Emits the
// announced number of words with every protocol token in place. With
// kFinishSentence it keeps going after the terminator until the sentence
// closes, at most config.residual_max words. The word stream depends only on
// (seed, salt), never on the stride or residual. Throws kProtocol when the
// context has no valid opening token.
GenerationResult rule_follow(std::string_view context,
                             const HanselConfig& config,
                             const RuleFollowerConfig& follower,
                             std::uint64_t salt = 0);

// --- n-gram model --------------------------------------------------------

enum class GenerationMode { kFree, kProtocolAssisted };

struct NgramOptions {
  int order = 3;
  double alpha = 0.1;
  int clock_cap = 1024;
};

// Position state appended to every context: what the last special token in
// the output was, and how many words have been emitted since.
struct Clock {
  enum class Phase : std::uint32_t { kNone = 0, kOpen = 1, kPeriod = 2, kEnd = 3 };
  Phase phase = Phase::kNone;
  std::uint32_t minor = 0;  // only for kOpen: words due before the next token
  std::uint32_t count = 0;

  std::uint32_t encode(std::uint32_t cap) const;
};

struct GenerateOptions {
  GenerationMode mode = GenerationMode::kFree;
  int max_len = 1722;  // words
  std::uint64_t seed = 0;
};

// Additive-smoothed n-gram over (prompt, output) streams, factored in two:
//   event model  P(word | keep | dec | end  given clock, last symbol), backing
//                off to the clock alone;
//   word model   P(word given the previous n-1 symbols), backing off to
//                shorter histories.
// Special tokens are modelled relative to the previous one: "keep" repeats its
// major count, "dec" lowers it by one.
class NgramModel {
 public:
  static NgramModel train(std::span<const AugmentedExample> corpus,
                          const NgramOptions& options = {},
                          const TokenRendering& rendering = {});

  const NgramOptions& options() const { return options_; }
  std::size_t vocabulary_size() const { return symbols_.size(); }
  // Number of symbols a prediction ranges over: every word plus end, keep
  // and dec.
  std::size_t prediction_size() const { return symbols_.size() - kFirstWord + 3; }

  // Smoothed next-symbol distribution over all predictable symbols given a
  // whitespace-split history (special tokens written "<open>",
  // "<|len:w:keep|>" or "<|len:w:dec|>") and a clock. End is "</s>".
  std::unordered_map<std::string, double> distribution(
      std::span<const std::string> history, const Clock& clock) const;

  GenerationResult generate(std::string_view context, const HanselConfig& config,
                            const GenerateOptions& options) const;

  nlohmann::json to_json() const;
  static NgramModel from_json(const nlohmann::json& j);

  static constexpr std::string_view kKeepSymbol = "<|len:w:keep|>";
  static constexpr std::string_view kDecSymbol = "<|len:w:dec|>";

 private:
  static constexpr std::uint32_t kEos = 0;
  static constexpr std::uint32_t kUnk = 1;
  static constexpr std::uint32_t kBos = 2;
  static constexpr std::uint32_t kOpen = 3;
  static constexpr std::uint32_t kKeep = 4;
  static constexpr std::uint32_t kDec = 5;
  static constexpr std::uint32_t kFirstWord = 6;

  enum Event : std::uint32_t { kEventEnd = 0, kEventWord = 1, kEventKeep = 2, kEventDec = 3 };
  static constexpr std::size_t kEventCount = 4;

  struct Counts {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;  // sorted by symbol
    std::uint64_t total = 0;
  };
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const;
  };
  using Table = std::unordered_map<std::vector<std::uint32_t>, Counts, KeyHash>;

  NgramModel() = default;
  std::uint32_t intern(const std::string& word);
  std::uint32_t lookup(std::string_view word) const;
  const Counts* event_context(std::uint32_t last, const Clock& clock) const;
  const Counts* word_context(std::span<const std::uint32_t> history) const;
  std::array<double, kEventCount> event_probabilities(const Counts* counts) const;
  double word_probability(const Counts* counts, std::uint32_t word) const;

  NgramOptions options_;
  TokenRendering rendering_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::uint32_t> index_;
  Table events_;
  Table words_;
};

// --- synthetic template corpus ------------------------------------------

struct SyntheticCorpusOptions {
  std::size_t size = 1000;
  std::uint64_t seed = 0;
  // Reference lengths: with probability typical_share uniform in
  // [typical_min, typical_max], otherwise uniform in [min_length, max_length].
  double typical_share = 0.8;
  int typical_min = 10;
  int typical_max = 40;
  int min_length = 3;
  int max_length = 150;
  Task task = Task::kSummarization;
  std::string id_prefix = "syn";
};

// Number of sentence templates behind the synthetic corpus (26).
std::size_t synthetic_template_count();

// Reference of exactly `length` words assembled from the templates.
std::string synthetic_reference(int length, std::uint64_t seed,
                                std::uint64_t salt);

std::vector<Example> synthetic_corpus(const SyntheticCorpusOptions& options);

}  // namespace lenctl

#endif  // LENCTL_DESK_LM_HPP_
