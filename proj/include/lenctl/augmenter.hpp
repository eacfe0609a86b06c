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

// Training-record construction for the three frameworks:
//   hansel  - prompt with length clause, output carrying remaining-length tokens
//   gretel  - prompt with length clause, output verbatim
//   vanilla - prompt without length clause, output verbatim
// plus residual assignment, training-mix composition and inference contexts.

#ifndef LENCTL_AUGMENTER_HPP_
#define LENCTL_AUGMENTER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lenctl/config.hpp"
#include "lenctl/text.hpp"

namespace lenctl {

enum class Framework { kVanilla, kVanillaStar, kGretel, kHansel };

std::string_view framework_name(Framework framework);
std::optional<Framework> parse_framework(std::string_view text);

// Loss-mask request for the finetuning side: mask `n` model tokens ending
// right before the byte offset `anchor` (the terminator token in the output).
struct MaskDirective {
  std::size_t anchor = 0;
  int n = 0;
};

struct UnitLength {
  LengthUnit unit = LengthUnit::kWord;
  std::int64_t target = 0;
  std::int64_t effective = 0;
};

struct AugmentedExample {
  std::string id;
  Framework framework = Framework::kVanilla;
  std::string source;
  Task task = Task::kSummarization;
  std::string prompt;
  std::string output;
  std::int64_t target_length = 0;     // primary unit
  std::int64_t effective_length = 0;  // target_length - residual
  std::int64_t residual = 0;
  std::optional<MaskDirective> mask;
  std::vector<UnitLength> units;  // coarse to fine; back() is the primary unit
};

nlohmann::json to_json(const AugmentedExample& record);
AugmentedExample augmented_from_json(const nlohmann::json& j);

// "Summarize." / "Reply."
std::string base_prompt(Task task);
// "Summarize. Answer in 17 words." / "Reply in 18 words." /
// "Reply in 4 sentences and 20 words."
std::string length_prompt(Task task, std::span<const UnitLength> lengths);

// Drops everything past `config.max_tokens` primary units from the reference.
Example truncate_reference(const Example& example, const HanselConfig& config,
                           const Segmenter& segmenter = Segmenter{});

// Token placement for every configured family; `residual` applies to the
// primary unit only. Throws kEmptyReference for an empty reference and
// kConfig when residual > residual_max or residual >= length.
AugmentedExample augment_hansel(const Example& example,
                                const HanselConfig& config, int residual,
                                const Segmenter& segmenter = Segmenter{});
// Same placement; requires at least one family and is the entry point used
// for sentence + word control.
AugmentedExample augment_multi_unit(const Example& example,
                                    const HanselConfig& config, int residual,
                                    const Segmenter& segmenter = Segmenter{});
AugmentedExample augment_gretel(const Example& example,
                                const HanselConfig& config,
                                const Segmenter& segmenter = Segmenter{});
AugmentedExample augment_vanilla(const Example& example,
                                 const HanselConfig& config,
                                 const Segmenter& segmenter = Segmenter{});

// Residual per corpus position. round(residual_fraction * N) positions are
// selected by a seeded shuffle and given a residual drawn uniformly from
// 1..residual_max; references with fewer than residual_max + 1 units and all
// unselected positions get 0.
std::vector<int> assign_residuals(std::span<const Example> corpus,
                                  const HanselConfig& config,
                                  const Segmenter& segmenter = Segmenter{});

// Largest-remainder apportionment of `total` items over `fractions` (which
// should sum to 1). Ties go to the earlier bucket.
std::vector<std::size_t> largest_remainder(std::size_t total,
                                           std::span<const double> fractions);

struct ProvenanceEntry {
  std::string id;
  Framework framework = Framework::kVanilla;
  int residual = 0;
};

struct MixManifest {
  Framework target = Framework::kHansel;
  std::size_t vanilla = 0;
  std::size_t gretel = 0;
  std::size_t hansel = 0;
  std::vector<ProvenanceEntry> provenance;  // corpus order
  std::vector<std::string> warnings;

  std::size_t total() const { return vanilla + gretel + hansel; }
};

nlohmann::json to_json(const MixManifest& manifest);

struct MixResult {
  std::vector<AugmentedExample> records;  // corpus order
  MixManifest manifest;
};

// hansel target: vanilla_fraction vanilla, then gretel_within_nonvanilla of
// the rest gretel, remainder hansel. gretel target: vanilla_fraction
// vanilla, rest gretel. vanilla target: everything vanilla.
MixResult compose_mix(std::span<const Example> corpus,
                      const HanselConfig& config, Framework target,
                      const Segmenter& segmenter = Segmenter{});

// Source, blank line, prompt. Hansel contexts end with the opening token(s)
// as a generation prefix; vanilla has no length clause; vanilla* and gretel
// carry the clause only.
std::string build_inference_context(std::string_view source, Task task,
                                    std::int64_t target_length,
                                    Framework framework,
                                    const HanselConfig& config);
// Multi-unit variant; `targets` follows config.ordered_units().
std::string build_inference_context(std::string_view source, Task task,
                                    std::span<const std::int64_t> targets,
                                    Framework framework,
                                    const HanselConfig& config);

}  // namespace lenctl

#endif  // LENCTL_AUGMENTER_HPP_
