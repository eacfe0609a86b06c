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

#include "lenctl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <unordered_map>

#include "lenctl/error.hpp"
#include "lenctl/porter.hpp"
#include "lenctl/token.hpp"

namespace lenctl {

namespace {

std::vector<std::string_view> whitespace_words(std::string_view text) {
  std::vector<std::string_view> out;
  for (const Span& s : segment(text, LengthUnit::kWord).spans) {
    out.push_back(text.substr(s.begin, s.end - s.begin));
  }
  return out;
}

}  // namespace

bool detect_infinite(std::string_view generated, const InfiniteOptions& options) {
  const std::vector<std::string_view> words = whitespace_words(generated);
  const std::size_t n = words.size();
  if (options.max_tokens > 0 && n >= static_cast<std::size_t>(options.max_tokens)) {
    return true;
  }
  if (options.repeats < 2 || options.ngram < 1) return false;
  const auto max_period = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(options.max_period, 1)), n);
  for (std::size_t p = 1; p <= max_period; ++p) {
    // The span is periodic with period p for run + p words; it then holds
    // floor((run + p - ngram) / p) + 1 copies of its leading window.
    const std::size_t needed =
        static_cast<std::size_t>(options.repeats - 2) * p +
        static_cast<std::size_t>(options.ngram);
    if (needed + p > n) continue;
    std::size_t run = 0;
    for (std::size_t j = 0; j + p < n; ++j) {
      run = words[j] == words[j + p] ? run + 1 : 0;
      if (run >= needed) return true;
    }
  }
  return false;
}

EvalRecord make_eval_record(std::string id, std::string_view raw_generation,
                            std::int64_t target_length, std::string reference,
                            const HanselConfig& config,
                            const InfiniteOptions& infinite, bool hit_cap) {
  EvalRecord rec;
  rec.id = std::move(id);
  try {
    rec.generated = strip_tokens(raw_generation, config.rendering);
  } catch (const Error&) {
    rec.generated = std::string(raw_generation);
  }
  rec.target_length = target_length;
  rec.reference = std::move(reference);
  rec.unit = config.unit();
  rec.infinite_flag = hit_cap || detect_infinite(rec.generated, infinite);
  return rec;
}

double mae(std::span<const EvalRecord> records, const Segmenter& segmenter) {
  double total = 0.0;
  std::size_t n = 0;
  for (const EvalRecord& r : records) {
    if (r.infinite_flag) continue;
    const auto length = static_cast<std::int64_t>(segmenter.count(r.generated, r.unit));
    total += static_cast<double>(std::llabs(length - r.target_length));
    ++n;
  }
  if (n == 0) throw Error(ErrorKind::kNoData, "no scorable records for MAE");
  return total / static_cast<double>(n);
}

std::vector<std::string> rouge_tokens(std::string_view text,
                                      const RougeOptions& options) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (current.empty()) return;
    if (options.stem && current.size() > 3) current = porter_stem(current);
    tokens.push_back(std::move(current));
    current.clear();
  };
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c >= 0x80) {
      current.push_back(static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::size_t lcs_length(std::span<const std::string> a,
                       std::span<const std::string> b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

RougeScore from_overlap(double overlap, double candidate_total,
                        double reference_total) {
  RougeScore s;
  s.precision = candidate_total > 0 ? overlap / candidate_total : 0.0;
  s.recall = reference_total > 0 ? overlap / reference_total : 0.0;
  s.f1 = (s.precision + s.recall) > 0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

std::unordered_map<std::string, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::unordered_map<std::string, std::size_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

RougeScore rouge(std::string_view candidate, std::string_view reference,
                 RougeVariant variant, const RougeOptions& options) {
  const std::vector<std::string> cand = rouge_tokens(candidate, options);
  const std::vector<std::string> ref = rouge_tokens(reference, options);
  if (ref.empty()) {
    RougeScore s;
    s.empty_reference = true;
    return s;
  }
  if (variant == RougeVariant::kRougeL) {
    return from_overlap(static_cast<double>(lcs_length(cand, ref)),
                        static_cast<double>(cand.size()),
                        static_cast<double>(ref.size()));
  }
  const std::size_t n = variant == RougeVariant::kRouge1 ? 1 : 2;
  const auto cand_counts = ngram_counts(cand, n);
  const auto ref_counts = ngram_counts(ref, n);
  std::size_t overlap = 0, cand_total = 0, ref_total = 0;
  for (const auto& [gram, c] : cand_counts) {
    cand_total += c;
    if (auto it = ref_counts.find(gram); it != ref_counts.end()) {
      overlap += std::min(c, it->second);
    }
  }
  for (const auto& [gram, c] : ref_counts) ref_total += c;
  return from_overlap(static_cast<double>(overlap), static_cast<double>(cand_total),
                      static_cast<double>(ref_total));
}

EvalReport evaluate(std::span<const EvalRecord> records,
                    const EvalOptions& options, const Segmenter& segmenter) {
  EvalReport report;
  double abs_total = 0.0;
  double r1 = 0.0, r2 = 0.0, rl = 0.0;
  std::size_t n_rouge = 0;
  std::map<std::int64_t, std::pair<double, std::size_t>> per_target;
  for (const EvalRecord& r : records) {
    if (r.infinite_flag) {
      ++report.n_infinite;
      continue;
    }
    ++report.n_scored;
    const auto length = static_cast<std::int64_t>(segmenter.count(r.generated, r.unit));
    const auto err = static_cast<double>(std::llabs(length - r.target_length));
    abs_total += err;
    auto& slot = per_target[r.target_length];
    slot.first += err;
    ++slot.second;
    if (!rouge_tokens(r.reference, options.rouge).empty()) {
      r1 += rouge(r.generated, r.reference, RougeVariant::kRouge1, options.rouge).f1;
      r2 += rouge(r.generated, r.reference, RougeVariant::kRouge2, options.rouge).f1;
      rl += rouge(r.generated, r.reference, RougeVariant::kRougeL, options.rouge).f1;
      ++n_rouge;
    }
  }
  if (report.n_scored > 0) {
    report.mae = abs_total / static_cast<double>(report.n_scored);
  }
  if (n_rouge > 0) {
    const auto n = static_cast<double>(n_rouge);
    report.rouge1 = r1 / n;
    report.rouge2 = r2 / n;
    report.rougeL = rl / n;
  }
  for (const auto& [target, slot] : per_target) {
    report.per_target[target] = {slot.first / static_cast<double>(slot.second),
                                 slot.second};
  }
  return report;
}

nlohmann::json to_json(const EvalReport& report) {
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  nlohmann::json per_target = nlohmann::json::object();
  for (const auto& [target, b] : report.per_target) {
    per_target[std::to_string(target)] = {{"mae", b.mae}, {"n", b.n}};
  }
  return {{"mae", opt(report.mae)},
          {"rouge1", opt(report.rouge1)},
          {"rouge2", opt(report.rouge2)},
          {"rougeL", opt(report.rougeL)},
          {"n_scored", report.n_scored},
          {"n_infinite", report.n_infinite},
          {"per_target", per_target}};
}

std::vector<std::int64_t> default_sweep_targets() { return {5, 20, 50, 80, 130}; }

TargetSweep sweep_targets(const Generator& generator,
                          std::span<const Example> sources,
                          std::span<const std::int64_t> targets,
                          const HanselConfig& config, Framework framework,
                          std::string label, const EvalOptions& options) {
  if (targets.empty()) throw Error(ErrorKind::kConfig, "no sweep targets given");
  TargetSweep sweep;
  sweep.label = std::move(label);
  for (const std::int64_t target : targets) {
    TargetSweepRow row;
    row.target = target;
    std::vector<EvalRecord> records;
    records.reserve(sources.size());
    for (const Example& ex : sources) {
      GenerationRequest req;
      req.id = ex.id;
      req.source = ex.source;
      req.task = ex.task;
      req.target_length = target;
      req.reference = ex.reference;
      req.context = build_inference_context(ex.source, ex.task, target, framework, config);
      std::string raw;
      try {
        raw = generator(req);
      } catch (const std::exception&) {
        ++row.n_failed;
        continue;
      }
      records.push_back(make_eval_record(ex.id, raw, target, ex.reference, config,
                                         options.infinite));
    }
    row.report = evaluate(records, options);
    sweep.rows.push_back(std::move(row));
  }
  return sweep;
}

namespace {

std::vector<std::int64_t> union_targets(std::span<const TargetSweep> sweeps) {
  std::vector<std::int64_t> targets;
  for (const TargetSweep& s : sweeps) {
    for (const TargetSweepRow& r : s.rows) {
      if (std::find(targets.begin(), targets.end(), r.target) == targets.end()) {
        targets.push_back(r.target);
      }
    }
  }
  return targets;
}

const TargetSweepRow* find_row(const TargetSweep& s, std::int64_t target) {
  for (const TargetSweepRow& r : s.rows) {
    if (r.target == target) return &r;
  }
  return nullptr;
}

}  // namespace

std::string format_target_table(std::span<const TargetSweep> sweeps) {
  const std::vector<std::int64_t> targets = union_targets(sweeps);
  std::ostringstream out;
  out << std::left << std::setw(16) << "generator";
  for (std::int64_t t : targets) out << std::right << std::setw(10) << t;
  out << std::right << std::setw(10) << "inf" << '\n';
  out << std::fixed << std::setprecision(2);
  for (const TargetSweep& s : sweeps) {
    out << std::left << std::setw(16) << s.label;
    std::size_t infinite = 0;
    for (std::int64_t t : targets) {
      const TargetSweepRow* row = find_row(s, t);
      if (row) infinite += row->report.n_infinite;
      if (row && row->report.mae) {
        out << std::right << std::setw(10) << *row->report.mae;
      } else {
        out << std::right << std::setw(10) << "-";
      }
    }
    out << std::right << std::setw(10) << infinite << '\n';
  }
  return out.str();
}

std::string target_sweep_csv(std::span<const TargetSweep> sweeps) {
  std::ostringstream out;
  out << "generator,target,mae,n_scored,n_infinite,n_failed,rougeL\n";
  out << std::setprecision(10);
  for (const TargetSweep& s : sweeps) {
    for (const TargetSweepRow& r : s.rows) {
      out << s.label << ',' << r.target << ',';
      if (r.report.mae) out << *r.report.mae;
      out << ',' << r.report.n_scored << ',' << r.report.n_infinite << ','
          << r.n_failed << ',';
      if (r.report.rougeL) out << *r.report.rougeL;
      out << '\n';
    }
  }
  return out.str();
}

std::string target_sweep_dat(std::span<const TargetSweep> sweeps) {
  const std::vector<std::int64_t> targets = union_targets(sweeps);
  std::ostringstream out;
  out << "# target";
  for (const TargetSweep& s : sweeps) out << ' ' << s.label;
  out << '\n' << std::setprecision(10);
  for (std::int64_t t : targets) {
    out << t;
    for (const TargetSweep& s : sweeps) {
      const TargetSweepRow* row = find_row(s, t);
      if (row && row->report.mae) {
        out << ' ' << *row->report.mae;
      } else {
        out << " NaN";
      }
    }
    out << '\n';
  }
  return out.str();
}

HyperparamGrid sweep_hyperparams(std::span<const Example> corpus,
                                 std::span<const int> deltas,
                                 std::span<const int> residuals,
                                 const HanselConfig& base,
                                 const CellPipeline& pipeline) {
  if (deltas.empty() || residuals.empty()) {
    throw Error(ErrorKind::kConfig, "hyperparameter lists must be non-empty");
  }
  HyperparamGrid grid;
  grid.deltas.assign(deltas.begin(), deltas.end());
  grid.residuals.assign(residuals.begin(), residuals.end());
  for (int delta : deltas) {
    for (int residual : residuals) {
      HanselConfig cfg = base;
      cfg.units = {UnitStride{base.unit(), delta}};
      cfg.residual_max = residual;
      cfg.check();
      grid.mae.push_back(pipeline(corpus, cfg));
    }
  }
  return grid;
}

std::string format_grid_table(const HyperparamGrid& grid) {
  std::ostringstream out;
  out << std::setw(8) << "delta";
  for (int r : grid.residuals) out << std::setw(10) << ("d=" + std::to_string(r));
  out << '\n' << std::fixed << std::setprecision(2);
  for (std::size_t i = 0; i < grid.deltas.size(); ++i) {
    out << std::setw(8) << grid.deltas[i];
    for (std::size_t j = 0; j < grid.residuals.size(); ++j) {
      out << std::setw(10) << grid.at(i, j);
    }
    out << '\n';
  }
  return out.str();
}

std::string grid_csv(const HyperparamGrid& grid) {
  std::ostringstream out;
  out << "delta,residual_max,mae\n" << std::setprecision(10);
  for (std::size_t i = 0; i < grid.deltas.size(); ++i) {
    for (std::size_t j = 0; j < grid.residuals.size(); ++j) {
      out << grid.deltas[i] << ',' << grid.residuals[j] << ',' << grid.at(i, j) << '\n';
    }
  }
  return out.str();
}

CorpusStats corpus_stats(std::span<const Example> corpus, LengthUnit unit,
                         const Segmenter& segmenter) {
  if (corpus.empty()) throw Error(ErrorKind::kNoData, "corpus is empty");
  CorpusStats s;
  s.min = static_cast<std::size_t>(-1);
  std::vector<double> lengths;
  lengths.reserve(corpus.size());
  for (const Example& ex : corpus) {
    const std::size_t l = segmenter.count(ex.reference, unit);
    lengths.push_back(static_cast<double>(l));
    s.max = std::max(s.max, l);
    s.min = std::min(s.min, l);
  }
  s.count = corpus.size();
  double sum = 0.0;
  for (double l : lengths) sum += l;
  s.mean = sum / static_cast<double>(s.count);
  double sq = 0.0;
  for (double l : lengths) sq += (l - s.mean) * (l - s.mean);
  s.std = std::sqrt(sq / static_cast<double>(s.count));
  return s;
}

nlohmann::json to_json(const CorpusStats& stats) {
  return {{"mean", stats.mean}, {"std", stats.std},   {"max", stats.max},
          {"min", stats.min},   {"count", stats.count}};
}

}  // namespace lenctl
