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

#include "lenctl/text.hpp"

#include <algorithm>
#include <array>

#include "lenctl/error.hpp"

namespace lenctl {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBoundary: return "boundary";
    case ErrorKind::kMalformedToken: return "malformed-token";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kEmptyReference: return "empty-reference";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kNoData: return "no-data";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kJudgeUnavailable: return "judge-unavailable";
    case ErrorKind::kScoringParse: return "scoring-parse";
    case ErrorKind::kUsage: return "usage";
  }
  return "unknown";
}

std::string_view unit_code(LengthUnit unit) {
  switch (unit) {
    case LengthUnit::kWord: return "w";
    case LengthUnit::kSentence: return "s";
    case LengthUnit::kCharacter: return "c";
    case LengthUnit::kToken: return "t";
  }
  return "?";
}

std::string_view unit_name(LengthUnit unit) {
  switch (unit) {
    case LengthUnit::kWord: return "word";
    case LengthUnit::kSentence: return "sentence";
    case LengthUnit::kCharacter: return "character";
    case LengthUnit::kToken: return "token";
  }
  return "?";
}

std::string_view unit_plural(LengthUnit unit) {
  switch (unit) {
    case LengthUnit::kWord: return "words";
    case LengthUnit::kSentence: return "sentences";
    case LengthUnit::kCharacter: return "characters";
    case LengthUnit::kToken: return "tokens";
  }
  return "?";
}

std::optional<LengthUnit> parse_unit(std::string_view text) {
  for (LengthUnit u : {LengthUnit::kWord, LengthUnit::kSentence,
                       LengthUnit::kCharacter, LengthUnit::kToken}) {
    if (text == unit_code(u) || text == unit_name(u) || text == unit_plural(u)) {
      return u;
    }
  }
  return std::nullopt;
}

int unit_granularity(LengthUnit unit) {
  switch (unit) {
    case LengthUnit::kSentence: return 0;
    case LengthUnit::kWord: return 1;
    case LengthUnit::kToken: return 2;
    case LengthUnit::kCharacter: return 3;
  }
  return 4;
}

std::string_view task_name(Task task) {
  return task == Task::kDialogue ? "dialogue" : "summarization";
}

std::optional<Task> parse_task(std::string_view text) {
  if (text == "summarization" || text == "summary") return Task::kSummarization;
  if (text == "dialogue" || text == "dialog") return Task::kDialogue;
  return std::nullopt;
}

namespace utf8 {

std::optional<Decoded> decode(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return std::nullopt;
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) return Decoded{lead, 1};

  std::size_t length = 0;
  char32_t cp = 0;
  char32_t min_value = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2; cp = lead & 0x1F; min_value = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3; cp = lead & 0x0F; min_value = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4; cp = lead & 0x07; min_value = 0x10000;
  } else {
    return std::nullopt;
  }
  if (pos + length > text.size()) return std::nullopt;
  for (std::size_t i = 1; i < length; ++i) {
    const unsigned char cont = byte(pos + i);
    if ((cont & 0xC0) != 0x80) return std::nullopt;
    cp = (cp << 6) | (cont & 0x3F);
  }
  if (cp < min_value || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return std::nullopt;
  }
  return Decoded{cp, length};
}

std::optional<std::size_t> first_invalid(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto d = decode(text, pos);
    if (!d) return pos;
    pos += d->length;
  }
  return std::nullopt;
}

bool is_valid(std::string_view text) { return !first_invalid(text).has_value(); }

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

}  // namespace utf8

namespace {

// Invalid bytes are treated as one-byte non-space characters so that
// segmentation is total over arbitrary input.
struct CodePoint {
  char32_t value;
  std::size_t length;
};

CodePoint next_code_point(std::string_view text, std::size_t pos) {
  if (auto d = utf8::decode(text, pos)) return {d->code_point, d->length};
  return {0xFFFD, 1};
}

std::vector<Span> word_spans(std::string_view text) {
  std::vector<Span> spans;
  std::size_t pos = 0;
  bool in_word = false;
  std::size_t start = 0;
  while (pos < text.size()) {
    const CodePoint cp = next_code_point(text, pos);
    const bool space = utf8::is_space(cp.value);
    if (!space && !in_word) {
      in_word = true;
      start = pos;
    } else if (space && in_word) {
      in_word = false;
      spans.push_back({start, pos});
    }
    pos += cp.length;
  }
  if (in_word) spans.push_back({start, text.size()});
  return spans;
}

std::vector<Span> character_spans(std::string_view text) {
  std::vector<Span> spans;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const CodePoint cp = next_code_point(text, pos);
    if (!utf8::is_space(cp.value)) spans.push_back({pos, pos + cp.length});
    pos += cp.length;
  }
  return spans;
}

constexpr std::array<std::string_view, 10> kClosers = {
    "\"", "'", ")", "]", "}", "”", "’", "»", "*", "_"};

std::string_view strip_closers(std::string_view word) {
  bool changed = true;
  while (changed && !word.empty()) {
    changed = false;
    for (std::string_view c : kClosers) {
      if (word.size() > c.size() && word.ends_with(c)) {
        word.remove_suffix(c.size());
        changed = true;
      }
    }
  }
  return word;
}

bool ends_with_terminator(std::string_view word) {
  word = strip_closers(word);
  if (word.empty()) return false;
  const char last = word.back();
  return last == '.' || last == '!' || last == '?' || word.ends_with("…");
}

}  // namespace

std::vector<std::string> default_abbreviations() {
  return {"Mr.",  "Mrs.", "Ms.",  "Dr.",  "Prof.", "Sr.",  "Jr.",
          "St.",  "Mt.",  "vs.",  "e.g.", "i.e.",  "U.S.", "U.K.",
          "No.",  "Inc.", "Ltd.", "Co.",  "Gen.",  "Gov.", "Sen.",
          "Rep.", "Lt.",  "Col.", "Sgt.", "Capt.", "approx."};
}

Segmenter::Segmenter(SegmenterOptions options) : options_(std::move(options)) {}

Segmentation Segmenter::segment(std::string_view text, LengthUnit unit) const {
  Segmentation out;
  out.unit = unit;
  switch (unit) {
    case LengthUnit::kWord:
      out.spans = word_spans(text);
      break;
    case LengthUnit::kCharacter:
      out.spans = character_spans(text);
      break;
    case LengthUnit::kToken:
      if (!options_.tokenizer) {
        throw Error(ErrorKind::kConfig,
                    "the token unit needs a tokenizer adapter");
      }
      out.spans = options_.tokenizer->spans(text);
      break;
    case LengthUnit::kSentence: {
      const std::vector<Span> words = word_spans(text);
      std::size_t first = 0;
      for (std::size_t i = 0; i < words.size(); ++i) {
        const std::string_view word =
            text.substr(words[i].begin, words[i].end - words[i].begin);
        const bool guarded =
            std::find(options_.abbreviations.begin(),
                      options_.abbreviations.end(),
                      word) != options_.abbreviations.end();
        if ((ends_with_terminator(word) && !guarded) || i + 1 == words.size()) {
          out.spans.push_back({words[first].begin, words[i].end});
          first = i + 1;
        }
      }
      break;
    }
  }
  return out;
}

Segmentation segment(std::string_view text, LengthUnit unit) {
  static const Segmenter kDefault;
  return kDefault.segment(text, unit);
}

std::size_t count_units(std::string_view text, LengthUnit unit) {
  return segment(text, unit).count();
}

std::size_t boundary_offset(const Segmentation& segmentation,
                            std::size_t text_size, std::size_t index) {
  if (index > segmentation.count()) {
    throw Error(ErrorKind::kBoundary,
                "unit index " + std::to_string(index) + " is past the last of " +
                    std::to_string(segmentation.count()) + " units");
  }
  return index < segmentation.count() ? segmentation.spans[index].begin
                                      : text_size;
}

std::string insert_at_unit_boundary(std::string_view text,
                                    const Segmentation& segmentation,
                                    std::size_t index, std::string_view marker) {
  const std::size_t at = boundary_offset(segmentation, text.size(), index);
  std::string out;
  out.reserve(text.size() + marker.size());
  out.append(text.substr(0, at));
  out.append(marker);
  out.append(text.substr(at));
  return out;
}

std::string insert_at_unit_boundary(std::string_view text, LengthUnit unit,
                                    std::size_t index, std::string_view marker) {
  return insert_at_unit_boundary(text, segment(text, unit), index, marker);
}

std::string truncate_units(std::string_view text, const Segmenter& segmenter,
                           LengthUnit unit, std::size_t max_units) {
  const Segmentation seg = segmenter.segment(text, unit);
  if (seg.count() <= max_units) return std::string(text);
  if (max_units == 0) return {};
  return std::string(text.substr(0, seg.spans[max_units - 1].end));
}

}  // namespace lenctl
