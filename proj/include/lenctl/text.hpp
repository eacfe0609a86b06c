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

// Length units, segmentation and the corpus record type.

#ifndef LENCTL_TEXT_HPP_
#define LENCTL_TEXT_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lenctl {

enum class LengthUnit { kWord, kSentence, kCharacter, kToken };

// One-letter code used inside rendered special tokens ("w", "s", "c", "t").
std::string_view unit_code(LengthUnit unit);
// "word", "sentence", ...
std::string_view unit_name(LengthUnit unit);
// "words", "sentences", ... as used in prompt length clauses.
std::string_view unit_plural(LengthUnit unit);
// Accepts the name, the plural or the one-letter code.
std::optional<LengthUnit> parse_unit(std::string_view text);
// Coarse-to-fine rank: sentence < word < token < character.
int unit_granularity(LengthUnit unit);

enum class Task { kSummarization, kDialogue };

std::string_view task_name(Task task);
std::optional<Task> parse_task(std::string_view text);

struct Example {
  std::string id;
  std::string source;
  std::string reference;
  Task task = Task::kSummarization;
  std::map<std::string, std::string> meta;
};

// Half-open byte range [begin, end) into the segmented text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

struct Segmentation {
  LengthUnit unit = LengthUnit::kWord;
  std::vector<Span> spans;

  std::size_t count() const { return spans.size(); }
  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

// Supplies model-token spans for LengthUnit::kToken. The library never
// embeds a tokenizer; callers plug one in through SegmenterOptions.
class TokenizerAdapter {
 public:
  virtual ~TokenizerAdapter() = default;
  virtual std::vector<Span> spans(std::string_view text) const = 0;
};

std::vector<std::string> default_abbreviations();

struct SegmenterOptions {
  // Words that end in '.' but do not close a sentence. Compared
  // case-sensitively against the whole word.
  std::vector<std::string> abbreviations = default_abbreviations();
  std::shared_ptr<const TokenizerAdapter> tokenizer;
};

class Segmenter {
 public:
  Segmenter() : Segmenter(SegmenterOptions{}) {}
  explicit Segmenter(SegmenterOptions options);

  // Words are maximal runs of non-whitespace code points. Sentences close on
  // a word ending in '.', '!' or '?' (closing quotes and brackets allowed
  // after the terminator) unless the word is a guarded abbreviation.
  // Characters are non-whitespace code points. Throws kConfig for the token
  // unit when no adapter is configured.
  Segmentation segment(std::string_view text, LengthUnit unit) const;
  std::size_t count(std::string_view text, LengthUnit unit) const {
    return segment(text, unit).count();
  }

  const SegmenterOptions& options() const { return options_; }

 private:
  SegmenterOptions options_;
};

Segmentation segment(std::string_view text, LengthUnit unit);
std::size_t count_units(std::string_view text, LengthUnit unit);

// Inserts `marker` at the start of unit `index` (index == count appends at
// the very end). No whitespace is added or removed, so deleting the marker
// bytes restores the input exactly. Throws kBoundary when index > count.
std::string insert_at_unit_boundary(std::string_view text,
                                    const Segmentation& segmentation,
                                    std::size_t index, std::string_view marker);
std::string insert_at_unit_boundary(std::string_view text, LengthUnit unit,
                                    std::size_t index, std::string_view marker);

// Byte offset at which a marker for unit boundary `index` is placed.
std::size_t boundary_offset(const Segmentation& segmentation,
                            std::size_t text_size, std::size_t index);

// Keeps the first `max_units` units of `text` (and the separators between
// them). Returns the input unchanged when it is already short enough.
std::string truncate_units(std::string_view text, const Segmenter& segmenter,
                           LengthUnit unit, std::size_t max_units);

namespace utf8 {

// Decodes one code point starting at `pos`. Returns the code point and its
// byte length, or nullopt on an invalid sequence.
struct Decoded {
  char32_t code_point;
  std::size_t length;
};
std::optional<Decoded> decode(std::string_view text, std::size_t pos);
bool is_valid(std::string_view text);
// Offset of the first invalid byte, if any.
std::optional<std::size_t> first_invalid(std::string_view text);
bool is_space(char32_t code_point);

}  // namespace utf8

}  // namespace lenctl

#endif  // LENCTL_TEXT_HPP_
