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

// Length-control and overlap metrics, infinite-generation accounting,
// target and hyperparameter sweeps, and corpus length statistics.

#ifndef LENCTL_EVAL_HPP_
#define LENCTL_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lenctl/augmenter.hpp"
#include "lenctl/config.hpp"
#include "lenctl/text.hpp"

namespace lenctl {

struct EvalRecord {
  std::string id;
  std::string generated;  // special tokens already stripped
  std::int64_t target_length = 0;
  std::string reference;  // may be empty when only length is scored
  bool infinite_flag = false;
  LengthUnit unit = LengthUnit::kWord;
};

struct InfiniteOptions {
  int max_tokens = 1722;  // word count at which a generation counts as capped
  int ngram = 4;
  int repeats = 8;
  int max_period = 256;
};

// True when the generation reached the cap, or some window of `ngram` words
// recurs `repeats` times in a row at a fixed period (1..max_period words).
bool detect_infinite(std::string_view generated,
                     const InfiniteOptions& options = {});

// Builds a record from a raw generation: strips special tokens and runs the
// detector. `hit_cap` forces the flag (the generator reported truncation).
EvalRecord make_eval_record(std::string id, std::string_view raw_generation,
                            std::int64_t target_length, std::string reference,
                            const HanselConfig& config,
                            const InfiniteOptions& infinite,
                            bool hit_cap = false);

// Mean absolute length error over non-flagged records. Throws kNoData when
// every record is flagged (or there are none).
double mae(std::span<const EvalRecord> records,
           const Segmenter& segmenter = Segmenter{});

enum class RougeVariant { kRouge1, kRouge2, kRougeL };

struct RougeOptions {
  bool stem = false;
};

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  bool empty_reference = false;
};

// Lowercase, every character outside [a-z0-9] and non-ASCII bytes becomes a
// separator, whitespace split, optional Porter stemming of tokens longer
// than three characters.
std::vector<std::string> rouge_tokens(std::string_view text,
                                      const RougeOptions& options = {});

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b);

RougeScore rouge(std::string_view candidate, std::string_view reference,
                 RougeVariant variant, const RougeOptions& options = {});

struct EvalOptions {
  InfiniteOptions infinite;
  RougeOptions rouge;
};

struct TargetBreakdown {
  double mae = 0.0;
  std::size_t n = 0;
};

struct EvalReport {
  std::optional<double> mae;  // empty when nothing was scored
  std::optional<double> rouge1, rouge2, rougeL;  // mean F1 over scored records with references
  std::size_t n_scored = 0;
  std::size_t n_infinite = 0;
  std::map<std::int64_t, TargetBreakdown> per_target;
};

EvalReport evaluate(std::span<const EvalRecord> records,
                    const EvalOptions& options = {},
                    const Segmenter& segmenter = Segmenter{});

nlohmann::json to_json(const EvalReport& report);

struct GenerationRequest {
  std::string id;
  std::string source;
  Task task = Task::kSummarization;
  std::int64_t target_length = 0;
  std::string context;
  std::string reference;
};

// Returns the raw continuation (special tokens allowed). Throwing marks the
// request as failed; it is skipped and counted.
using Generator = std::function<std::string(const GenerationRequest&)>;

std::vector<std::int64_t> default_sweep_targets();

struct TargetSweepRow {
  std::int64_t target = 0;
  EvalReport report;
  std::size_t n_failed = 0;
};

struct TargetSweep {
  std::string label;
  std::vector<TargetSweepRow> rows;
};

TargetSweep sweep_targets(const Generator& generator,
                          std::span<const Example> sources,
                          std::span<const std::int64_t> targets,
                          const HanselConfig& config, Framework framework,
                          std::string label,
                          const EvalOptions& options = {});

// One row per sweep, one MAE column per target.
std::string format_target_table(std::span<const TargetSweep> sweeps);
std::string target_sweep_csv(std::span<const TargetSweep> sweeps);
// Whitespace-separated columns (target, then one MAE column per sweep).
std::string target_sweep_dat(std::span<const TargetSweep> sweeps);

// augment -> simulate -> evaluate for one configuration; returns the MAE.
using CellPipeline =
    std::function<double(std::span<const Example>, const HanselConfig&)>;

struct HyperparamGrid {
  std::vector<int> deltas;
  std::vector<int> residuals;
  std::vector<double> mae;  // row-major: deltas x residuals

  double at(std::size_t delta_index, std::size_t residual_index) const {
    return mae[delta_index * residuals.size() + residual_index];
  }
};

HyperparamGrid sweep_hyperparams(std::span<const Example> corpus,
                                 std::span<const int> deltas,
                                 std::span<const int> residuals,
                                 const HanselConfig& base,
                                 const CellPipeline& pipeline);

std::string format_grid_table(const HyperparamGrid& grid);
std::string grid_csv(const HyperparamGrid& grid);

struct CorpusStats {
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t max = 0;
  std::size_t min = 0;
  std::size_t count = 0;
};

// Throws kNoData for an empty corpus.
CorpusStats corpus_stats(std::span<const Example> corpus, LengthUnit unit,
                         const Segmenter& segmenter = Segmenter{});

nlohmann::json to_json(const CorpusStats& stats);

}  // namespace lenctl

#endif  // LENCTL_EVAL_HPP_
