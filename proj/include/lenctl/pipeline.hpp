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

// File-level orchestration: run configuration, JSONL readers and writers,
// and the operations behind each CLI subcommand.

#ifndef LENCTL_PIPELINE_HPP_
#define LENCTL_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lenctl/augmenter.hpp"
#include "lenctl/config.hpp"
#include "lenctl/desk_lm.hpp"
#include "lenctl/eval.hpp"
#include "lenctl/judge.hpp"
#include "lenctl/validator.hpp"

namespace lenctl {

inline constexpr std::string_view kVersion = "0.3.0";

enum class SimulatorKind { kRule, kNgram };

struct SimulateSettings {
  SimulatorKind simulator = SimulatorKind::kRule;
  GenerationMode mode = GenerationMode::kFree;
  // Empty: each example is generated once with its reference length.
  std::vector<std::int64_t> targets;
  int max_len = 1722;
  ResidualBehavior residual_behavior = ResidualBehavior::kFinishSentence;
  int sentence_min = 4;
  int sentence_max = 14;
  bool corpus_lexicon = true;  // lexicon and sentence lengths from the input
  int threads = 4;
};

struct RunConfig {
  HanselConfig hansel;
  Framework framework = Framework::kHansel;
  bool mix = true;  // false: every record uses `framework`
  LengthUnit stats_unit = LengthUnit::kWord;
  EvalOptions eval;
  SimulateSettings simulate;
  NgramOptions ngram;
  std::vector<int> sweep_deltas{10, 20, 40};
  std::vector<int> sweep_residuals{0, 1, 3, 5};
  JudgeConfig judge;

  void check() const;
};

// Every field is optional in the file; absent fields keep the value from
// `base`. Unknown keys are rejected with kConfig.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
nlohmann::json to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path, RunConfig base = {});
// SHA-256 of the canonical JSON form.
std::string config_hash(const RunConfig& config);

// --- JSONL ----------------------------------------------------------------

// Parse errors carry the 1-based line number. Blank lines are skipped.
std::vector<Example> read_examples(const std::filesystem::path& path);
std::vector<AugmentedExample> read_augmented(const std::filesystem::path& path);

struct GenerationLine {
  std::string id;
  std::string source;
  Task task = Task::kSummarization;
  std::int64_t target_length = 0;
  std::string generated;  // raw, special tokens allowed
  std::string reference;
  std::string framework;
  bool hit_cap = false;
};

nlohmann::json to_json(const GenerationLine& line);
std::vector<GenerationLine> read_generations(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
// Writes through a sibling temporary file and renames it into place, so a
// failed run never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// run_id is derived from the config hash and the input bytes, so reruns of
// the same command produce identical artifacts.
nlohmann::json run_stamp(const RunConfig& config, std::string_view command,
                         const std::vector<std::filesystem::path>& inputs);

nlohmann::json to_json(const Example& example);

// --- operations -------------------------------------------------------------

struct AugmentOutcome {
  std::size_t records = 0;
  MixManifest manifest;
};

// Writes the augmented JSONL to `out` and the manifest JSON to
// `manifest_path` (default: out + ".manifest.json").
AugmentOutcome run_augment(const std::filesystem::path& input,
                           const std::filesystem::path& out,
                           std::optional<std::filesystem::path> manifest_path,
                           const RunConfig& config);

struct ValidationLine {
  std::size_t line = 0;
  std::string id;
  AutomatonVerdict verdict;
};

struct ValidationSummary {
  std::size_t lines = 0;
  std::size_t checked = 0;  // hansel records run through the automaton
  std::vector<ValidationLine> failures;
  std::vector<std::string> warnings;
  bool ok() const { return failures.empty(); }
};

nlohmann::json to_json(const ValidationSummary& summary);
ValidationSummary run_validate(const std::filesystem::path& input, const RunConfig& config);

// One generation per (example, target); output order follows the input.
std::vector<GenerationLine> simulate(const std::vector<Example>& corpus,
                                     const RunConfig& config,
                                     const NgramModel* model = nullptr);
std::size_t run_simulate(const std::filesystem::path& input, const std::filesystem::path& out,
                         const RunConfig& config,
                         std::optional<std::filesystem::path> model_path = std::nullopt);

EvalReport evaluate_generations(const std::vector<GenerationLine>& lines, const RunConfig& config);
// Writes report JSON to `out`; optional per-target CSV and whitespace data file.
EvalReport run_evaluate(const std::filesystem::path& input, const std::filesystem::path& out,
                        const RunConfig& config,
                        std::optional<std::filesystem::path> csv = std::nullopt);

// Rule-follower MAE for one (delta, residual_max) cell: every example is
// generated at its reference length.
double rule_follower_cell(std::span<const Example> corpus, const HanselConfig& hansel,
                          const SimulateSettings& settings);
HyperparamGrid run_sweep_grid(const std::filesystem::path& input,
                              const std::filesystem::path& out, const RunConfig& config);

// One sweep row per framework in `frameworks` (hansel and gretel need an
// n-gram model for anything but the rule follower).
std::vector<TargetSweep> run_sweep_targets(const std::filesystem::path& input,
                                           const std::filesystem::path& out,
                                           const RunConfig& config,
                                           const std::vector<Framework>& frameworks,
                                           std::optional<std::filesystem::path> model_path =
                                               std::nullopt);

CorpusStats run_stats(const std::filesystem::path& input,
                      const std::optional<std::filesystem::path>& out, const RunConfig& config);

// Trains on the configured training mix and writes the model JSON.
NgramModel train_ngram(const std::vector<Example>& corpus, const RunConfig& config);
void run_train(const std::filesystem::path& input, const std::filesystem::path& out,
               const RunConfig& config);

// Writes the synthetic template corpus as Example JSONL.
void run_synth(const std::filesystem::path& out, const SyntheticCorpusOptions& options);

struct JudgeSummary {
  std::size_t scored = 0;
  std::size_t failed = 0;
};

JudgeSummary run_judge(const std::filesystem::path& input, const std::filesystem::path& out,
                       const RunConfig& config,
                       std::shared_ptr<JudgeTransport> transport = nullptr);

}  // namespace lenctl

#endif  // LENCTL_PIPELINE_HPP_
