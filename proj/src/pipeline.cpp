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

#include "lenctl/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <thread>

#include "lenctl/error.hpp"
#include "lenctl/hash.hpp"
#include "lenctl/random.hpp"

namespace lenctl {

namespace {

using nlohmann::json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  if (!obj.is_object()) {
    throw Error(ErrorKind::kConfig, std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorKind::kConfig,
                  "unknown config key '" + std::string(where) + "." + key + "'");
    }
  }
}

template <typename T>
void take(const json& obj, const char* key, T& field) {
  if (obj.contains(key)) field = obj.at(key).get<T>();
}

LengthUnit unit_or_throw(const std::string& name) {
  const auto unit = parse_unit(name);
  if (!unit) throw Error(ErrorKind::kConfig, "unknown unit '" + name + "'");
  return *unit;
}

Framework framework_or_throw(const std::string& name) {
  const auto fw = parse_framework(name);
  if (!fw) throw Error(ErrorKind::kConfig, "unknown framework '" + name + "'");
  return *fw;
}

std::string_view simulator_name(SimulatorKind kind) {
  return kind == SimulatorKind::kRule ? "rule" : "ngram";
}

std::string_view mode_name(GenerationMode mode) {
  return mode == GenerationMode::kFree ? "free" : "assisted";
}

std::string_view behavior_name(ResidualBehavior b) {
  return b == ResidualBehavior::kStopAtZero ? "stop_at_zero" : "finish_sentence";
}

std::string error_context(const std::filesystem::path& path, std::size_t line,
                          const std::string& what) {
  return path.string() + ":" + std::to_string(line) + ": " + what;
}

// Calls `fn(line_number, json)` for every non-blank line.
template <typename Fn>
void for_each_jsonl(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(),
                    [](char c) { return c == ' ' || c == '\t'; })) {
      continue;
    }
    if (!utf8::is_valid(line)) {
      throw Error(ErrorKind::kParse, error_context(path, number, "invalid UTF-8"), number);
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kParse, error_context(path, number, e.what()), number);
    }
    if (!j.is_object()) {
      throw Error(ErrorKind::kParse, error_context(path, number, "expected a JSON object"),
                  number);
    }
    try {
      fn(number, j);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kParse, error_context(path, number, e.what()), number);
    } catch (const Error& e) {
      if (e.offset()) throw;
      throw Error(e.kind(), error_context(path, number, e.what()), number);
    }
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read error on " + path.string());
}

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::kParse, std::string("missing field '") + key + "'");
  if (!j.at(key).is_string()) {
    throw Error(ErrorKind::kParse, std::string("field '") + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

Task task_or_throw(const std::string& name) {
  const auto task = parse_task(name);
  if (!task) throw Error(ErrorKind::kParse, "unknown task '" + name + "'");
  return *task;
}

std::string jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const json& row : rows) {
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::uint64_t request_salt(std::string_view id, std::int64_t target) {
  return stable_hash(id) ^ (static_cast<std::uint64_t>(target) * 0x9E3779B97F4A7C15ULL);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return seed * 0xD1B54A32D192ED03ULL + salt;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(mu);
            if (!first_error) first_error = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

RuleFollowerConfig follower_for(std::span<const Example> corpus, const RunConfig& config) {
  RuleFollowerConfig base;
  base.sentence_min = config.simulate.sentence_min;
  base.sentence_max = config.simulate.sentence_max;
  base.residual_behavior = config.simulate.residual_behavior;
  base.seed = config.hansel.seed;
  if (config.simulate.corpus_lexicon) return rule_follower_from_corpus(corpus, base);
  return base;
}

}  // namespace

// --- configuration ----------------------------------------------------------

void RunConfig::check() const {
  hansel.check();
  if (simulate.max_len < 1) throw Error(ErrorKind::kConfig, "simulate.max_len must be >= 1");
  if (simulate.sentence_min < 1 || simulate.sentence_max < simulate.sentence_min) {
    throw Error(ErrorKind::kConfig, "simulate sentence length range is empty");
  }
  for (std::int64_t t : simulate.targets) {
    if (t < 1) throw Error(ErrorKind::kConfig, "targets must be >= 1");
  }
  if (ngram.order < 1) throw Error(ErrorKind::kConfig, "ngram.order must be >= 1");
  if (!(ngram.alpha > 0.0)) throw Error(ErrorKind::kConfig, "ngram.alpha must be positive");
  if (ngram.clock_cap < 1) throw Error(ErrorKind::kConfig, "ngram.clock_cap must be >= 1");
  if (eval.infinite.ngram < 1 || eval.infinite.repeats < 2 || eval.infinite.max_period < 1 ||
      eval.infinite.max_tokens < 1) {
    throw Error(ErrorKind::kConfig, "invalid infinite-generation detector settings");
  }
  for (int d : sweep_deltas) {
    if (d < 1) throw Error(ErrorKind::kConfig, "sweep deltas must be >= 1");
  }
  for (int r : sweep_residuals) {
    if (r < 0) throw Error(ErrorKind::kConfig, "sweep residuals must be >= 0");
  }
  judge.check();
}

RunConfig run_config_from_json(const json& j, RunConfig base) {
  RunConfig c = std::move(base);
  try {
    check_keys(j, {"hansel", "framework", "mix", "stats_unit", "eval", "simulate", "ngram",
                   "sweep", "judge"},
               "config");
    if (j.contains("hansel")) {
      const json& h = j.at("hansel");
      check_keys(h, {"units", "residual_max", "residual_fraction", "mask_n", "seed",
                     "vanilla_fraction", "gretel_within_nonvanilla", "max_tokens", "rendering"},
                 "hansel");
      if (h.contains("units")) {
        c.hansel.units.clear();
        for (const json& u : h.at("units")) {
          check_keys(u, {"unit", "delta"}, "hansel.units[]");
          c.hansel.units.push_back({unit_or_throw(u.at("unit").get<std::string>()),
                                    u.at("delta").get<int>()});
        }
      }
      take(h, "residual_max", c.hansel.residual_max);
      take(h, "residual_fraction", c.hansel.residual_fraction);
      take(h, "mask_n", c.hansel.mask_n);
      take(h, "seed", c.hansel.seed);
      take(h, "vanilla_fraction", c.hansel.vanilla_fraction);
      take(h, "gretel_within_nonvanilla", c.hansel.gretel_within_nonvanilla);
      take(h, "max_tokens", c.hansel.max_tokens);
      if (h.contains("rendering")) {
        const json& r = h.at("rendering");
        check_keys(r, {"full", "compact"}, "hansel.rendering");
        take(r, "full", c.hansel.rendering.full_template);
        take(r, "compact", c.hansel.rendering.compact_template);
      }
    }
    if (j.contains("framework")) c.framework = framework_or_throw(j.at("framework"));
    take(j, "mix", c.mix);
    if (j.contains("stats_unit")) c.stats_unit = unit_or_throw(j.at("stats_unit"));
    if (j.contains("eval")) {
      const json& e = j.at("eval");
      check_keys(e, {"stem", "max_tokens", "ngram", "repeats", "max_period"}, "eval");
      take(e, "stem", c.eval.rouge.stem);
      take(e, "max_tokens", c.eval.infinite.max_tokens);
      take(e, "ngram", c.eval.infinite.ngram);
      take(e, "repeats", c.eval.infinite.repeats);
      take(e, "max_period", c.eval.infinite.max_period);
    }
    if (j.contains("simulate")) {
      const json& s = j.at("simulate");
      check_keys(s, {"simulator", "mode", "targets", "max_len", "residual_behavior",
                     "sentence_min", "sentence_max", "corpus_lexicon", "threads"},
                 "simulate");
      if (s.contains("simulator")) {
        const auto name = s.at("simulator").get<std::string>();
        if (name == "rule") c.simulate.simulator = SimulatorKind::kRule;
        else if (name == "ngram") c.simulate.simulator = SimulatorKind::kNgram;
        else throw Error(ErrorKind::kConfig, "unknown simulator '" + name + "'");
      }
      if (s.contains("mode")) {
        const auto name = s.at("mode").get<std::string>();
        if (name == "free") c.simulate.mode = GenerationMode::kFree;
        else if (name == "assisted") c.simulate.mode = GenerationMode::kProtocolAssisted;
        else throw Error(ErrorKind::kConfig, "unknown generation mode '" + name + "'");
      }
      take(s, "targets", c.simulate.targets);
      take(s, "max_len", c.simulate.max_len);
      if (s.contains("residual_behavior")) {
        const auto name = s.at("residual_behavior").get<std::string>();
        if (name == "stop_at_zero") c.simulate.residual_behavior = ResidualBehavior::kStopAtZero;
        else if (name == "finish_sentence")
          c.simulate.residual_behavior = ResidualBehavior::kFinishSentence;
        else throw Error(ErrorKind::kConfig, "unknown residual behavior '" + name + "'");
      }
      take(s, "sentence_min", c.simulate.sentence_min);
      take(s, "sentence_max", c.simulate.sentence_max);
      take(s, "corpus_lexicon", c.simulate.corpus_lexicon);
      take(s, "threads", c.simulate.threads);
    }
    if (j.contains("ngram")) {
      const json& n = j.at("ngram");
      check_keys(n, {"order", "alpha", "clock_cap"}, "ngram");
      take(n, "order", c.ngram.order);
      take(n, "alpha", c.ngram.alpha);
      take(n, "clock_cap", c.ngram.clock_cap);
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      check_keys(s, {"deltas", "residuals"}, "sweep");
      take(s, "deltas", c.sweep_deltas);
      take(s, "residuals", c.sweep_residuals);
    }
    if (j.contains("judge")) {
      const json& g = j.at("judge");
      check_keys(g, {"endpoint", "model", "api_key_env", "timeout_seconds", "max_retries",
                     "retry_backoff_ms", "cache_dir", "temperature", "max_in_flight"},
                 "judge");
      take(g, "endpoint", c.judge.endpoint);
      take(g, "model", c.judge.model);
      take(g, "api_key_env", c.judge.api_key_env);
      take(g, "timeout_seconds", c.judge.timeout_seconds);
      take(g, "max_retries", c.judge.max_retries);
      take(g, "retry_backoff_ms", c.judge.retry_backoff_ms);
      if (g.contains("cache_dir")) c.judge.cache_dir = g.at("cache_dir").get<std::string>();
      take(g, "temperature", c.judge.temperature);
      take(g, "max_in_flight", c.judge.max_in_flight);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("bad config value: ") + e.what());
  }
  return c;
}

json to_json(const RunConfig& c) {
  json units = json::array();
  for (const UnitStride& u : c.hansel.units) {
    units.push_back({{"unit", unit_name(u.unit)}, {"delta", u.stride}});
  }
  return {
      {"hansel",
       {{"units", units},
        {"residual_max", c.hansel.residual_max},
        {"residual_fraction", c.hansel.residual_fraction},
        {"mask_n", c.hansel.mask_n},
        {"seed", c.hansel.seed},
        {"vanilla_fraction", c.hansel.vanilla_fraction},
        {"gretel_within_nonvanilla", c.hansel.gretel_within_nonvanilla},
        {"max_tokens", c.hansel.max_tokens},
        {"rendering",
         {{"full", c.hansel.rendering.full_template},
          {"compact", c.hansel.rendering.compact_template}}}}},
      {"framework", framework_name(c.framework)},
      {"mix", c.mix},
      {"stats_unit", unit_name(c.stats_unit)},
      {"eval",
       {{"stem", c.eval.rouge.stem},
        {"max_tokens", c.eval.infinite.max_tokens},
        {"ngram", c.eval.infinite.ngram},
        {"repeats", c.eval.infinite.repeats},
        {"max_period", c.eval.infinite.max_period}}},
      {"simulate",
       {{"simulator", simulator_name(c.simulate.simulator)},
        {"mode", mode_name(c.simulate.mode)},
        {"targets", c.simulate.targets},
        {"max_len", c.simulate.max_len},
        {"residual_behavior", behavior_name(c.simulate.residual_behavior)},
        {"sentence_min", c.simulate.sentence_min},
        {"sentence_max", c.simulate.sentence_max},
        {"corpus_lexicon", c.simulate.corpus_lexicon},
        {"threads", c.simulate.threads}}},
      {"ngram",
       {{"order", c.ngram.order}, {"alpha", c.ngram.alpha}, {"clock_cap", c.ngram.clock_cap}}},
      {"sweep", {{"deltas", c.sweep_deltas}, {"residuals", c.sweep_residuals}}},
      {"judge",
       {{"endpoint", c.judge.endpoint},
        {"model", c.judge.model},
        {"api_key_env", c.judge.api_key_env},
        {"timeout_seconds", c.judge.timeout_seconds},
        {"max_retries", c.judge.max_retries},
        {"retry_backoff_ms", c.judge.retry_backoff_ms},
        {"cache_dir", c.judge.cache_dir.string()},
        {"temperature", c.judge.temperature},
        {"max_in_flight", c.judge.max_in_flight}}},
  };
}

RunConfig load_run_config(const std::filesystem::path& path, RunConfig base) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
  return run_config_from_json(j, std::move(base));
}

std::string config_hash(const RunConfig& config) { return sha256_hex(to_json(config).dump()); }

// --- files -------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::kIo, "read error on " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorKind::kIo, "write error on " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot move output into place: " + path.string());
  }
}

json run_stamp(const RunConfig& config, std::string_view command,
               const std::vector<std::filesystem::path>& inputs) {
  const std::string hash = config_hash(config);
  std::string material = hash;
  json in = json::array();
  for (const auto& p : inputs) {
    const std::string digest = sha256_hex(read_file(p));
    material += digest;
    in.push_back({{"path", p.string()}, {"sha256", digest}});
  }
  return {{"tool", "lenctl"},
          {"version", kVersion},
          {"command", command},
          {"config_hash", hash},
          {"run_id", sha256_hex(std::string(command) + material).substr(0, 16)},
          {"inputs", in}};
}

std::vector<Example> read_examples(const std::filesystem::path& path) {
  std::vector<Example> out;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_jsonl(path, [&](std::size_t line, const json& j) {
    Example ex;
    ex.id = required_string(j, "id");
    ex.source = required_string(j, "source");
    ex.reference = required_string(j, "reference");
    ex.task = task_or_throw(required_string(j, "task"));
    if (j.contains("meta")) {
      if (!j.at("meta").is_object()) throw Error(ErrorKind::kParse, "meta must be an object");
      for (const auto& [k, v] : j.at("meta").items()) {
        if (!v.is_string()) throw Error(ErrorKind::kParse, "meta values must be strings");
        ex.meta[k] = v.get<std::string>();
      }
    }
    if (auto [it, inserted] = seen.emplace(ex.id, line); !inserted) {
      throw Error(ErrorKind::kParse, "duplicate id '" + ex.id + "' (first on line " +
                                         std::to_string(it->second) + ")");
    }
    out.push_back(std::move(ex));
  });
  return out;
}

std::vector<AugmentedExample> read_augmented(const std::filesystem::path& path) {
  std::vector<AugmentedExample> out;
  for_each_jsonl(path, [&](std::size_t, const json& j) { out.push_back(augmented_from_json(j)); });
  return out;
}

json to_json(const Example& ex) {
  json j = {{"id", ex.id},
            {"source", ex.source},
            {"reference", ex.reference},
            {"task", task_name(ex.task)}};
  if (!ex.meta.empty()) j["meta"] = ex.meta;
  return j;
}

json to_json(const GenerationLine& g) {
  return {{"id", g.id},
          {"task", task_name(g.task)},
          {"source", g.source},
          {"target_length", g.target_length},
          {"generated", g.generated},
          {"reference", g.reference},
          {"framework", g.framework},
          {"hit_cap", g.hit_cap}};
}

std::vector<GenerationLine> read_generations(const std::filesystem::path& path) {
  std::vector<GenerationLine> out;
  for_each_jsonl(path, [&](std::size_t, const json& j) {
    GenerationLine g;
    g.id = required_string(j, "id");
    g.generated = required_string(j, "generated");
    if (!j.contains("target_length") || !j.at("target_length").is_number_integer()) {
      throw Error(ErrorKind::kParse, "field 'target_length' must be an integer");
    }
    g.target_length = j.at("target_length").get<std::int64_t>();
    g.source = j.value("source", std::string{});
    g.reference = j.value("reference", std::string{});
    g.framework = j.value("framework", std::string{});
    g.task = task_or_throw(j.value("task", std::string{"summarization"}));
    g.hit_cap = j.value("hit_cap", false);
    out.push_back(std::move(g));
  });
  return out;
}

// --- augment / validate -----------------------------------------------------

AugmentOutcome run_augment(const std::filesystem::path& input, const std::filesystem::path& out,
                           std::optional<std::filesystem::path> manifest_path,
                           const RunConfig& config) {
  config.check();
  const std::vector<Example> corpus = read_examples(input);
  MixResult mix;
  if (corpus.empty()) {
    mix.manifest.target = config.framework;
  } else if (config.mix) {
    mix = compose_mix(corpus, config.hansel, config.framework);
  } else {
    const std::vector<int> residuals = config.framework == Framework::kHansel
                                           ? assign_residuals(corpus, config.hansel)
                                           : std::vector<int>(corpus.size(), 0);
    mix.manifest.target = config.framework;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      switch (config.framework) {
        case Framework::kHansel:
          mix.records.push_back(augment_hansel(corpus[i], config.hansel, residuals[i]));
          ++mix.manifest.hansel;
          break;
        case Framework::kGretel:
          mix.records.push_back(augment_gretel(corpus[i], config.hansel));
          ++mix.manifest.gretel;
          break;
        default:
          mix.records.push_back(augment_vanilla(corpus[i], config.hansel));
          ++mix.manifest.vanilla;
          break;
      }
      mix.manifest.provenance.push_back(
          {corpus[i].id, mix.records.back().framework, residuals[i]});
    }
  }
  if (corpus.empty()) mix.manifest.warnings.push_back("input has zero records");

  std::vector<json> rows;
  rows.reserve(mix.records.size());
  for (const AugmentedExample& rec : mix.records) rows.push_back(to_json(rec));

  json manifest = to_json(mix.manifest);
  manifest["run"] = run_stamp(config, "augment", {input});
  manifest["config"] = to_json(config);
  const std::filesystem::path mpath =
      manifest_path ? *manifest_path : std::filesystem::path(out.string() + ".manifest.json");
  write_file_atomic(out, jsonl(rows));
  try {
    write_file_atomic(mpath, manifest.dump(2) + "\n");
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(out, ec);
    throw;
  }
  return {mix.records.size(), std::move(mix.manifest)};
}

json to_json(const ValidationSummary& s) {
  json failures = json::array();
  for (const ValidationLine& f : s.failures) {
    json v = to_json(f.verdict);
    v["line"] = f.line;
    v["id"] = f.id;
    failures.push_back(std::move(v));
  }
  return {{"ok", s.ok()},
          {"lines", s.lines},
          {"checked", s.checked},
          {"failures", failures},
          {"warnings", s.warnings}};
}

ValidationSummary run_validate(const std::filesystem::path& input, const RunConfig& config) {
  config.check();
  ValidationSummary summary;
  for_each_jsonl(input, [&](std::size_t line, const json& j) {
    const AugmentedExample rec = augmented_from_json(j);
    ++summary.lines;
    AutomatonVerdict verdict;
    if (rec.framework == Framework::kHansel) {
      ++summary.checked;
      verdict = validate(rec.output, config.hansel);
    } else {
      verdict = validate_plain(rec.output, config.hansel.rendering);
    }
    if (!verdict.ok()) summary.failures.push_back({line, rec.id, std::move(verdict)});
  });
  if (summary.lines == 0) summary.warnings.push_back("input has zero records");
  return summary;
}

// --- simulate / evaluate -----------------------------------------------------

std::vector<GenerationLine> simulate(const std::vector<Example>& corpus, const RunConfig& config,
                                     const NgramModel* model) {
  config.check();
  const SimulateSettings& s = config.simulate;
  if (s.simulator == SimulatorKind::kRule && config.framework != Framework::kHansel) {
    throw Error(ErrorKind::kConfig, "the rule follower only runs the hansel framework");
  }
  if (s.simulator == SimulatorKind::kNgram && !model) {
    throw Error(ErrorKind::kConfig, "n-gram simulation needs a trained model");
  }
  const RuleFollowerConfig follower = follower_for(corpus, config);

  struct Job {
    std::size_t example;
    std::int64_t target;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (s.targets.empty()) {
      const auto len = static_cast<std::int64_t>(count_units(corpus[i].reference, config.hansel.unit()));
      if (len > 0) jobs.push_back({i, len});
    } else {
      for (std::int64_t t : s.targets) jobs.push_back({i, t});
    }
  }

  std::vector<GenerationLine> out(jobs.size());
  parallel_for(jobs.size(), s.threads, [&](std::size_t k) {
    const Example& ex = corpus[jobs[k].example];
    const std::int64_t target = jobs[k].target;
    const std::string context =
        build_inference_context(ex.source, ex.task, target, config.framework, config.hansel);
    const std::uint64_t salt = request_salt(ex.id, target);
    GenerationResult result;
    if (s.simulator == SimulatorKind::kRule) {
      result = rule_follow(context, config.hansel, follower, salt);
    } else {
      result = model->generate(context, config.hansel,
                               {s.mode, s.max_len, mix_seed(config.hansel.seed, salt)});
    }
    GenerationLine& g = out[k];
    g.id = ex.id;
    g.source = ex.source;
    g.task = ex.task;
    g.target_length = target;
    g.generated = std::move(result.text);
    g.reference = ex.reference;
    g.framework = std::string(framework_name(config.framework));
    g.hit_cap = result.hit_cap;
  });
  return out;
}

std::size_t run_simulate(const std::filesystem::path& input, const std::filesystem::path& out,
                         const RunConfig& config,
                         std::optional<std::filesystem::path> model_path) {
  const std::vector<Example> corpus = read_examples(input);
  std::optional<NgramModel> model;
  std::vector<std::filesystem::path> inputs{input};
  if (model_path) {
    try {
      model = NgramModel::from_json(json::parse(read_file(*model_path)));
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kParse, model_path->string() + ": " + e.what());
    }
    inputs.push_back(*model_path);
  }
  const std::vector<GenerationLine> lines = simulate(corpus, config, model ? &*model : nullptr);
  std::vector<json> rows;
  rows.reserve(lines.size());
  for (const GenerationLine& g : lines) rows.push_back(to_json(g));
  const json stamp = run_stamp(config, "simulate", inputs);
  write_file_atomic(out, jsonl(rows));
  write_file_atomic(out.string() + ".run.json", stamp.dump(2) + "\n");
  return lines.size();
}

EvalReport evaluate_generations(const std::vector<GenerationLine>& lines,
                                const RunConfig& config) {
  std::vector<EvalRecord> records;
  records.reserve(lines.size());
  for (const GenerationLine& g : lines) {
    records.push_back(make_eval_record(g.id, g.generated, g.target_length, g.reference,
                                       config.hansel, config.eval.infinite, g.hit_cap));
  }
  return evaluate(records, config.eval);
}

EvalReport run_evaluate(const std::filesystem::path& input, const std::filesystem::path& out,
                        const RunConfig& config, std::optional<std::filesystem::path> csv) {
  config.check();
  const EvalReport report = evaluate_generations(read_generations(input), config);
  json doc = {{"run", run_stamp(config, "evaluate", {input})}, {"report", to_json(report)}};
  std::string table;
  if (csv) {
    std::ostringstream ss;
    ss << "target,n,mae\n";
    for (const auto& [target, b] : report.per_target) {
      ss << target << ',' << b.n << ',' << b.mae << '\n';
    }
    table = ss.str();
  }
  write_file_atomic(out, doc.dump(2) + "\n");
  if (csv) write_file_atomic(*csv, table);
  return report;
}

// --- sweeps -----------------------------------------------------------------

double rule_follower_cell(std::span<const Example> corpus, const HanselConfig& hansel,
                          const SimulateSettings& settings) {
  RunConfig rc;
  rc.hansel = hansel;
  rc.simulate = settings;
  rc.simulate.targets.clear();
  rc.simulate.simulator = SimulatorKind::kRule;
  rc.framework = Framework::kHansel;
  const std::vector<Example> examples(corpus.begin(), corpus.end());
  return *evaluate_generations(simulate(examples, rc), rc).mae;
}

HyperparamGrid run_sweep_grid(const std::filesystem::path& input,
                              const std::filesystem::path& out, const RunConfig& config) {
  config.check();
  const std::vector<Example> corpus = read_examples(input);
  if (corpus.empty()) throw Error(ErrorKind::kNoData, "sweep input has zero records");
  const HyperparamGrid grid = sweep_hyperparams(
      corpus, config.sweep_deltas, config.sweep_residuals, config.hansel,
      [&](std::span<const Example> c, const HanselConfig& h) {
        return rule_follower_cell(c, h, config.simulate);
      });
  json rows = json::array();
  for (std::size_t d = 0; d < grid.deltas.size(); ++d) {
    json row = json::array();
    for (std::size_t r = 0; r < grid.residuals.size(); ++r) row.push_back(grid.at(d, r));
    rows.push_back(row);
  }
  const json doc = {{"run", run_stamp(config, "sweep", {input})},
                    {"deltas", grid.deltas},
                    {"residuals", grid.residuals},
                    {"mae", rows}};
  write_file_atomic(out, doc.dump(2) + "\n");
  return grid;
}

std::vector<TargetSweep> run_sweep_targets(const std::filesystem::path& input,
                                           const std::filesystem::path& out,
                                           const RunConfig& config,
                                           const std::vector<Framework>& frameworks,
                                           std::optional<std::filesystem::path> model_path) {
  config.check();
  const std::vector<Example> corpus = read_examples(input);
  if (corpus.empty()) throw Error(ErrorKind::kNoData, "sweep input has zero records");
  std::optional<NgramModel> model;
  std::vector<std::filesystem::path> inputs{input};
  if (config.simulate.simulator == SimulatorKind::kNgram) {
    if (model_path) {
      model = NgramModel::from_json(json::parse(read_file(*model_path)));
      inputs.push_back(*model_path);
    }
  }
  const std::vector<std::int64_t> targets =
      config.simulate.targets.empty() ? default_sweep_targets() : config.simulate.targets;

  std::vector<TargetSweep> sweeps;
  for (Framework fw : frameworks) {
    RunConfig rc = config;
    rc.framework = fw;
    std::optional<NgramModel> own;
    const NgramModel* m = model ? &*model : nullptr;
    if (rc.simulate.simulator == SimulatorKind::kNgram && !m) {
      own = train_ngram(corpus, rc);
      m = &*own;
    }
    rc.simulate.targets = targets;
    const std::vector<GenerationLine> lines = simulate(corpus, rc, m);
    TargetSweep sweep;
    sweep.label = std::string(framework_name(fw));
    for (std::int64_t t : targets) {
      std::vector<GenerationLine> subset;
      for (const GenerationLine& g : lines) {
        if (g.target_length == t) subset.push_back(g);
      }
      sweep.rows.push_back({t, evaluate_generations(subset, rc), 0});
    }
    sweeps.push_back(std::move(sweep));
  }

  json doc_sweeps = json::array();
  for (const TargetSweep& s : sweeps) {
    json rows = json::array();
    for (const TargetSweepRow& r : s.rows) {
      rows.push_back({{"target", r.target}, {"n_failed", r.n_failed}, {"report", to_json(r.report)}});
    }
    doc_sweeps.push_back({{"label", s.label}, {"rows", rows}});
  }
  const json doc = {{"run", run_stamp(config, "sweep", inputs)}, {"sweeps", doc_sweeps}};
  write_file_atomic(out, doc.dump(2) + "\n");
  return sweeps;
}

// --- stats / train / judge ---------------------------------------------------

CorpusStats run_stats(const std::filesystem::path& input,
                      const std::optional<std::filesystem::path>& out, const RunConfig& config) {
  const CorpusStats stats = corpus_stats(read_examples(input), config.stats_unit);
  json doc = {{"run", run_stamp(config, "stats", {input})},
              {"unit", unit_name(config.stats_unit)},
              {"stats", to_json(stats)}};
  if (out) write_file_atomic(*out, doc.dump(2) + "\n");
  return stats;
}

NgramModel train_ngram(const std::vector<Example>& corpus, const RunConfig& config) {
  config.check();
  if (corpus.empty()) throw Error(ErrorKind::kNoData, "training corpus has zero records");
  std::vector<AugmentedExample> records;
  if (config.mix) {
    records = compose_mix(corpus, config.hansel, config.framework).records;
  } else {
    for (const Example& ex : corpus) {
      records.push_back(config.framework == Framework::kHansel
                            ? augment_hansel(ex, config.hansel, 0)
                            : config.framework == Framework::kGretel
                                  ? augment_gretel(ex, config.hansel)
                                  : augment_vanilla(ex, config.hansel));
    }
  }
  return NgramModel::train(records, config.ngram, config.hansel.rendering);
}

void run_train(const std::filesystem::path& input, const std::filesystem::path& out,
               const RunConfig& config) {
  const NgramModel model = train_ngram(read_examples(input), config);
  json doc = model.to_json();
  doc["run"] = run_stamp(config, "train", {input});
  write_file_atomic(out, doc.dump() + "\n");
}

void run_synth(const std::filesystem::path& out, const SyntheticCorpusOptions& options) {
  std::vector<json> rows;
  for (const Example& ex : synthetic_corpus(options)) rows.push_back(to_json(ex));
  write_file_atomic(out, jsonl(rows));
}

JudgeSummary run_judge(const std::filesystem::path& input, const std::filesystem::path& out,
                       const RunConfig& config, std::shared_ptr<JudgeTransport> transport) {
  config.check();
  const std::vector<GenerationLine> lines = read_generations(input);
  std::vector<JudgeItem> items;
  items.reserve(lines.size());
  for (const GenerationLine& g : lines) {
    std::string generated;
    try {
      generated = strip_tokens(g.generated, config.hansel.rendering);
    } catch (const Error&) {
      generated = g.generated;
    }
    items.push_back({g.source, std::move(generated), g.task});
  }
  Judge judge(config.judge, std::move(transport));
  const std::vector<JudgeOutcome> outcomes = judge.score_batch(items);

  JudgeSummary summary;
  std::vector<json> rows;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    json row = {{"id", lines[i].id}, {"target_length", lines[i].target_length}};
    if (outcomes[i].score) {
      json s = to_json(*outcomes[i].score);
      row["task"] = s["task"];
      row["categories"] = s["categories"];
      row["average"] = s["average"];
      ++summary.scored;
    } else {
      row["task"] = task_name(lines[i].task);
      row["error"] = error_kind_name(*outcomes[i].error);
      row["message"] = outcomes[i].message;
      row["raw"] = outcomes[i].raw;
      ++summary.failed;
    }
    rows.push_back(std::move(row));
  }
  write_file_atomic(out, jsonl(rows));
  write_file_atomic(out.string() + ".run.json",
                    run_stamp(config, "judge", {input}).dump(2) + "\n");
  return summary;
}

}  // namespace lenctl
