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

#include "lenctl/token.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include "lenctl/error.hpp"

namespace lenctl {

std::int64_t remaining(const SpecialToken& token, int stride) {
  if (stride < 1) {
    throw Error(ErrorKind::kConfig, "stride must be at least 1");
  }
  if (token.minor >= static_cast<std::uint32_t>(stride)) {
    throw Error(ErrorKind::kMalformedToken,
                "minor " + std::to_string(token.minor) +
                    " is not below the stride " + std::to_string(stride));
  }
  return static_cast<std::int64_t>(stride) * token.major + token.minor;
}

SpecialToken token_for_remaining(LengthUnit unit, std::int64_t units_left,
                                 int stride) {
  if (stride < 1) throw Error(ErrorKind::kConfig, "stride must be at least 1");
  if (units_left < 0) {
    throw Error(ErrorKind::kConfig, "remaining length cannot be negative");
  }
  return {unit, static_cast<std::uint32_t>(units_left / stride),
          static_cast<std::uint32_t>(units_left % stride)};
}

std::vector<ScheduledToken> placement_schedule(LengthUnit unit,
                                               std::int64_t effective,
                                               int stride) {
  std::vector<ScheduledToken> out;
  const SpecialToken opening = token_for_remaining(unit, effective, stride);
  out.push_back({0, opening});
  std::int64_t position = effective % stride;
  if (position != 0) out.push_back({position, SpecialToken{unit, opening.major, 0}});
  for (std::int64_t major = static_cast<std::int64_t>(opening.major) - 1;
       major >= 0; --major) {
    position += stride;
    out.push_back({position, SpecialToken{unit, static_cast<std::uint32_t>(major), 0}});
  }
  return out;
}

namespace {

enum class PieceKind { kLiteral, kUnit, kMajor, kMinor };

struct Piece {
  PieceKind kind;
  std::string literal;
};

std::vector<Piece> compile(std::string_view tmpl) {
  static constexpr std::array<std::pair<std::string_view, PieceKind>, 3> kSlots{
      {{"{unit}", PieceKind::kUnit},
       {"{major}", PieceKind::kMajor},
       {"{minor}", PieceKind::kMinor}}};
  std::vector<Piece> pieces;
  std::string literal;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool matched = false;
    for (const auto& [name, kind] : kSlots) {
      if (tmpl.substr(i).starts_with(name)) {
        if (!literal.empty()) pieces.push_back({PieceKind::kLiteral, literal});
        literal.clear();
        pieces.push_back({kind, {}});
        i += name.size();
        matched = true;
        break;
      }
    }
    if (!matched) literal.push_back(tmpl[i++]);
  }
  if (!literal.empty()) pieces.push_back({PieceKind::kLiteral, literal});
  return pieces;
}

std::string fill(std::string_view tmpl, const SpecialToken& token) {
  std::string out;
  for (const Piece& p : compile(tmpl)) {
    switch (p.kind) {
      case PieceKind::kLiteral: out += p.literal; break;
      case PieceKind::kUnit: out += unit_code(token.unit); break;
      case PieceKind::kMajor: out += std::to_string(token.major); break;
      case PieceKind::kMinor: out += std::to_string(token.minor); break;
    }
  }
  return out;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Matches `pieces` at text[pos]; returns the end offset on success.
std::optional<std::size_t> match(const std::vector<Piece>& pieces,
                                 std::string_view text, std::size_t pos,
                                 SpecialToken& out) {
  out = {};
  for (const Piece& p : pieces) {
    switch (p.kind) {
      case PieceKind::kLiteral:
        if (text.substr(pos).substr(0, p.literal.size()) != p.literal) {
          return std::nullopt;
        }
        pos += p.literal.size();
        break;
      case PieceKind::kUnit: {
        if (pos >= text.size()) return std::nullopt;
        auto unit = parse_unit(text.substr(pos, 1));
        if (!unit) return std::nullopt;
        out.unit = *unit;
        pos += 1;
        break;
      }
      case PieceKind::kMajor:
      case PieceKind::kMinor: {
        std::size_t end = pos;
        while (end < text.size() && is_digit(text[end])) ++end;
        const std::size_t width = end - pos;
        // Canonical decimal only: no leading zeros, fits in 9 digits.
        if (width == 0 || width > 9 || (width > 1 && text[pos] == '0')) {
          return std::nullopt;
        }
        const auto value =
            static_cast<std::uint32_t>(std::stoul(std::string(text.substr(pos, width))));
        (p.kind == PieceKind::kMajor ? out.major : out.minor) = value;
        pos = end;
        break;
      }
    }
  }
  return pos;
}

struct CompiledRendering {
  std::vector<Piece> full;
  std::vector<Piece> compact;
  std::vector<std::string> prefixes;
};

CompiledRendering compile(const TokenRendering& r) {
  CompiledRendering c{compile(r.full_template), compile(r.compact_template), {}};
  for (const auto* pieces : {&c.full, &c.compact}) {
    if (!pieces->empty() && pieces->front().kind == PieceKind::kLiteral) {
      c.prefixes.push_back(pieces->front().literal);
    }
  }
  return c;
}

void check_template(std::string_view tmpl, bool with_minor) {
  const auto pieces = compile(tmpl);
  int units = 0, majors = 0, minors = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    units += p.kind == PieceKind::kUnit;
    majors += p.kind == PieceKind::kMajor;
    minors += p.kind == PieceKind::kMinor;
    if (p.kind == PieceKind::kLiteral) {
      if (std::any_of(p.literal.begin(), p.literal.end(), [](char c) {
            return c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                   c == '\v' || c == '\f';
          })) {
        throw Error(ErrorKind::kConfig,
                    "token template contains whitespace: " + std::string(tmpl));
      }
    } else if (i + 1 < pieces.size()) {
      const Piece& next = pieces[i + 1];
      if (next.kind != PieceKind::kLiteral || is_digit(next.literal.front())) {
        throw Error(ErrorKind::kConfig,
                    "placeholders must be separated by a non-digit literal: " +
                        std::string(tmpl));
      }
    }
  }
  if (pieces.empty() || pieces.front().kind != PieceKind::kLiteral) {
    throw Error(ErrorKind::kConfig,
                "token template must start with a literal: " + std::string(tmpl));
  }
  if (units != 1 || majors != 1 || minors != (with_minor ? 1 : 0)) {
    throw Error(ErrorKind::kConfig,
                "token template has the wrong placeholders: " + std::string(tmpl));
  }
}

}  // namespace

void TokenRendering::check() const {
  check_template(full_template, true);
  check_template(compact_template, false);
  for (const SpecialToken& probe :
       {SpecialToken{LengthUnit::kWord, 12, 3}, SpecialToken{LengthUnit::kSentence, 4, 0},
        SpecialToken{LengthUnit::kCharacter, 0, 7}, SpecialToken{LengthUnit::kToken, 0, 0}}) {
    const std::string rendered = render(probe, *this);
    const ParsedStream parsed = parse_stream(rendered, *this);
    if (parsed.tokens.size() != 1 || parsed.tokens[0].token != probe ||
        !parsed.stripped.empty()) {
      throw Error(ErrorKind::kConfig, "token templates do not round-trip");
    }
  }
}

std::string render(const SpecialToken& token, const TokenRendering& rendering) {
  return fill(token.minor == 0 ? rendering.compact_template
                               : rendering.full_template,
              token);
}

ParsedStream parse_stream(std::string_view text,
                          const TokenRendering& rendering) {
  const CompiledRendering compiled = compile(rendering);
  ParsedStream out;
  out.stripped.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = std::string_view::npos;
    for (const std::string& prefix : compiled.prefixes) {
      next = std::min(next, text.find(prefix, pos));
    }
    if (next == std::string_view::npos) {
      out.stripped.append(text.substr(pos));
      break;
    }
    out.stripped.append(text.substr(pos, next - pos));
    SpecialToken token;
    std::optional<std::size_t> end = match(compiled.full, text, next, token);
    if (!end) end = match(compiled.compact, text, next, token);
    if (!end) {
      throw Error(ErrorKind::kParse,
                  "malformed special token at offset " + std::to_string(next),
                  next);
    }
    out.tokens.push_back({token, next, *end - next, out.stripped.size()});
    pos = *end;
  }
  return out;
}

}  // namespace lenctl
