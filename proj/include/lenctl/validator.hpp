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

// Counter automaton that checks a token-bearing text against the placement
// protocol: opening token before the first unit, one token after
// (remaining % stride) units, then one every `stride` units down to the
// terminator, followed by at most `residual_max` units.

#ifndef LENCTL_VALIDATOR_HPP_
#define LENCTL_VALIDATOR_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lenctl/config.hpp"
#include "lenctl/text.hpp"

namespace lenctl {

enum class ViolationKind {
  kParse,
  kMissingOpening,
  kLeadingUnits,
  kMalformed,
  kNonPeriodic,
  kSpacing,
  kCount,
  kMissingTerminator,
  kResidual,
  kAfterTerminator,
  kInsideUnit,
  kForeignUnit,
  kUnexpectedToken,
};

std::string_view violation_kind_name(ViolationKind kind);

struct Violation {
  std::size_t position = 0;  // byte offset into the validated text
  ViolationKind kind = ViolationKind::kParse;
  std::string detail;
};

struct AutomatonVerdict {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

// Runs one automaton per configured unit family and collects every
// violation. Never throws for bad input text; parse failures are reported
// as a kParse violation.
AutomatonVerdict validate(std::string_view text, const HanselConfig& config,
                          const Segmenter& segmenter = Segmenter{});

// Checks that a text carries no special tokens at all (gretel and vanilla
// outputs).
AutomatonVerdict validate_plain(std::string_view text,
                                const TokenRendering& rendering = {});

nlohmann::json to_json(const AutomatonVerdict& verdict);

}  // namespace lenctl

#endif  // LENCTL_VALIDATOR_HPP_
