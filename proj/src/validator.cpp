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

#include "lenctl/validator.hpp"

#include <algorithm>

#include "lenctl/error.hpp"
#include "lenctl/token.hpp"

namespace lenctl {

std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kParse: return "parse";
    case ViolationKind::kMissingOpening: return "missing_opening";
    case ViolationKind::kLeadingUnits: return "leading_units";
    case ViolationKind::kMalformed: return "malformed";
    case ViolationKind::kNonPeriodic: return "non_periodic";
    case ViolationKind::kSpacing: return "spacing";
    case ViolationKind::kCount: return "count";
    case ViolationKind::kMissingTerminator: return "missing_terminator";
    case ViolationKind::kResidual: return "residual";
    case ViolationKind::kAfterTerminator: return "after_terminator";
    case ViolationKind::kInsideUnit: return "inside_unit";
    case ViolationKind::kForeignUnit: return "foreign_unit";
    case ViolationKind::kUnexpectedToken: return "unexpected_token";
  }
  return "unknown";
}

namespace {

struct Located {
  SpecialToken token;
  std::size_t offset;    // original text
  std::size_t position;  // units preceding the token
};

// Number of units starting before `at` in the stripped text, and whether
// `at` falls strictly inside a unit.
std::pair<std::size_t, bool> unit_position(const Segmentation& seg,
                                           std::size_t at) {
  const auto it = std::lower_bound(
      seg.spans.begin(), seg.spans.end(), at,
      [](const Span& s, std::size_t value) { return s.begin < value; });
  const auto before = static_cast<std::size_t>(it - seg.spans.begin());
  const bool inside = before > 0 && seg.spans[before - 1].end > at;
  return {before, inside};
}

void run_family(const std::vector<Located>& tokens, std::size_t total_units,
                std::size_t text_size, int stride, int residual_max,
                LengthUnit unit, std::vector<Violation>& out) {
  const std::string plural(unit_plural(unit));
  const auto add = [&](std::size_t pos, ViolationKind kind, std::string detail) {
    out.push_back({pos, kind, std::move(detail)});
  };
  if (tokens.empty()) {
    add(0, ViolationKind::kMissingOpening,
        "no " + std::string(unit_name(unit)) + " tokens found");
    return;
  }
  const Located& opening = tokens.front();
  if (opening.position != 0) {
    add(opening.offset, ViolationKind::kLeadingUnits,
        std::to_string(opening.position) + " " + plural +
            " precede the opening token");
  }
  const auto value = [&](const SpecialToken& t) {
    return static_cast<std::int64_t>(stride) * t.major + t.minor;
  };
  if (opening.token.minor >= static_cast<std::uint32_t>(stride)) {
    add(opening.offset, ViolationKind::kMalformed,
        "minor " + std::to_string(opening.token.minor) +
            " is not below the stride " + std::to_string(stride));
  }
  const std::int64_t effective = value(opening.token);
  const std::int64_t first_gap = effective % stride;

  std::int64_t prev_remaining = effective;
  std::size_t prev_position = opening.position;
  std::size_t terminator_offset = opening.offset;
  bool terminated = effective == 0;

  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const Located& t = tokens[i];
    if (terminated) {
      add(t.offset, ViolationKind::kAfterTerminator,
          "token follows the terminator");
      continue;
    }
    if (t.token.minor != 0) {
      add(t.offset,
          t.token.minor >= static_cast<std::uint32_t>(stride)
              ? ViolationKind::kMalformed
              : ViolationKind::kNonPeriodic,
          "only the opening token may carry a minor count (found " +
              std::to_string(t.token.minor) + ")");
    }
    const auto gap = static_cast<std::int64_t>(t.position - prev_position);
    const std::int64_t expected_gap = (i == 1 && first_gap != 0) ? first_gap : stride;
    if (gap != expected_gap) {
      add(t.offset, ViolationKind::kSpacing,
          "expected " + std::to_string(expected_gap) + " " + plural +
              " since the previous token, found " + std::to_string(gap));
    }
    const std::int64_t claimed = value(t.token);
    const std::int64_t expected = prev_remaining - gap;
    if (claimed != expected) {
      add(t.offset, ViolationKind::kCount,
          "token claims " + std::to_string(claimed) + " " + plural +
              " left, counting gives " + std::to_string(expected));
    }
    prev_remaining = claimed;
    prev_position = t.position;
    if (claimed <= 0) {
      terminated = true;
      terminator_offset = t.offset;
    }
  }
  if (!terminated) {
    add(text_size, ViolationKind::kMissingTerminator,
        "stream ends before the terminator token");
    return;
  }
  const std::size_t trailing = total_units - prev_position;
  if (trailing > static_cast<std::size_t>(residual_max)) {
    add(terminator_offset, ViolationKind::kResidual,
        "residual " + std::to_string(trailing) + " > delta " +
            std::to_string(residual_max));
  }
}

}  // namespace

AutomatonVerdict validate(std::string_view text, const HanselConfig& config,
                          const Segmenter& segmenter) {
  AutomatonVerdict verdict;
  ParsedStream parsed;
  try {
    parsed = parse_stream(text, config.rendering);
  } catch (const Error& e) {
    verdict.violations.push_back(
        {e.offset().value_or(0), ViolationKind::kParse, e.what()});
    return verdict;
  }

  const std::vector<UnitStride> families = config.ordered_units();
  for (const TokenHit& hit : parsed.tokens) {
    const bool known = std::any_of(families.begin(), families.end(),
                                   [&](const UnitStride& f) {
                                     return f.unit == hit.token.unit;
                                   });
    if (!known) {
      verdict.violations.push_back(
          {hit.offset, ViolationKind::kForeignUnit,
           "token unit '" + std::string(unit_name(hit.token.unit)) +
               "' is not configured"});
    }
  }

  for (const UnitStride& family : families) {
    const Segmentation seg = segmenter.segment(parsed.stripped, family.unit);
    std::vector<Located> located;
    for (const TokenHit& hit : parsed.tokens) {
      if (hit.token.unit != family.unit) continue;
      const auto [position, inside] = unit_position(seg, hit.stripped_offset);
      if (inside) {
        verdict.violations.push_back(
            {hit.offset, ViolationKind::kInsideUnit,
             "token splits a " + std::string(unit_name(family.unit))});
      }
      located.push_back({hit.token, hit.offset, position});
    }
    run_family(located, seg.count(), text.size(), family.stride,
               config.residual_max, family.unit, verdict.violations);
  }
  std::stable_sort(verdict.violations.begin(), verdict.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return a.position < b.position;
                   });
  return verdict;
}

AutomatonVerdict validate_plain(std::string_view text,
                                const TokenRendering& rendering) {
  AutomatonVerdict verdict;
  try {
    for (const TokenHit& hit : parse_stream(text, rendering).tokens) {
      verdict.violations.push_back({hit.offset, ViolationKind::kUnexpectedToken,
                                    "special token in a plain output"});
    }
  } catch (const Error& e) {
    verdict.violations.push_back(
        {e.offset().value_or(0), ViolationKind::kParse, e.what()});
  }
  return verdict;
}

nlohmann::json to_json(const AutomatonVerdict& verdict) {
  nlohmann::json violations = nlohmann::json::array();
  for (const Violation& v : verdict.violations) {
    violations.push_back({{"position", v.position},
                          {"kind", violation_kind_name(v.kind)},
                          {"detail", v.detail}});
  }
  return {{"ok", verdict.ok()}, {"violations", violations}};
}

}  // namespace lenctl
