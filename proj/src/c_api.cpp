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

#include "lenctl/lenctl.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "lenctl/pipeline.hpp"

struct lenctl_config {
  lenctl::RunConfig value;
};

struct lenctl_ngram {
  explicit lenctl_ngram(lenctl::NgramModel m) : model(std::move(m)) {}
  lenctl::NgramModel model;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;
thread_local std::size_t g_last_line = 0;

lenctl_status status_of(lenctl::ErrorKind kind) {
  using lenctl::ErrorKind;
  switch (kind) {
    case ErrorKind::kBoundary: return LENCTL_ERR_BOUNDARY;
    case ErrorKind::kMalformedToken: return LENCTL_ERR_MALFORMED_TOKEN;
    case ErrorKind::kParse: return LENCTL_ERR_PARSE;
    case ErrorKind::kEmptyReference: return LENCTL_ERR_EMPTY_REFERENCE;
    case ErrorKind::kConfig: return LENCTL_ERR_CONFIG;
    case ErrorKind::kNoData: return LENCTL_ERR_NO_DATA;
    case ErrorKind::kProtocol: return LENCTL_ERR_PROTOCOL;
    case ErrorKind::kIo: return LENCTL_ERR_IO;
    case ErrorKind::kJudgeUnavailable: return LENCTL_ERR_JUDGE_UNAVAILABLE;
    case ErrorKind::kScoringParse: return LENCTL_ERR_SCORING_PARSE;
    case ErrorKind::kUsage: return LENCTL_ERR_INVALID_ARGUMENT;
  }
  return LENCTL_ERR_INTERNAL;
}

lenctl_status fail(lenctl_status status, std::string message, std::size_t line = 0) {
  g_last_error = std::move(message);
  g_last_line = line;
  return status;
}

template <typename Fn>
lenctl_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    g_last_line = 0;
    return fn();
  } catch (const lenctl::Error& e) {
    const bool line_numbered = e.kind() == lenctl::ErrorKind::kParse && e.offset();
    return fail(status_of(e.kind()), e.what(), line_numbered ? *e.offset() : 0);
  } catch (const std::bad_alloc&) {
    return fail(LENCTL_ERR_INTERNAL, "out of memory");
  } catch (const json::exception& e) {
    return fail(LENCTL_ERR_PARSE, e.what());
  } catch (const std::exception& e) {
    return fail(LENCTL_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size());
  out[s.size()] = '\0';
  return out;
}

void put(char** out, const std::string& s) {
  if (out) *out = dup_string(s);
}

std::optional<std::filesystem::path> opt_path(const char* p) {
  if (!p || !*p) return std::nullopt;
  return std::filesystem::path(p);
}

#define LENCTL_REQUIRE(cond, what) \
  do {                              \
    if (!(cond)) return fail(LENCTL_ERR_INVALID_ARGUMENT, what); \
  } while (0)

lenctl::LengthUnit unit_arg(const char* unit) {
  const auto u = lenctl::parse_unit(unit ? unit : "");
  if (!u) throw lenctl::Error(lenctl::ErrorKind::kUsage, std::string("unknown unit '") +
                                                          (unit ? unit : "") + "'");
  return *u;
}

json report_json(const lenctl::EvalReport& r) { return lenctl::to_json(r); }

}  // namespace

extern "C" {

const char* lenctl_version(void) { return "0.3.0"; }

const char* lenctl_status_name(lenctl_status status) {
  switch (status) {
    case LENCTL_OK: return "ok";
    case LENCTL_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case LENCTL_ERR_CONFIG: return "config";
    case LENCTL_ERR_PARSE: return "parse";
    case LENCTL_ERR_BOUNDARY: return "boundary";
    case LENCTL_ERR_MALFORMED_TOKEN: return "malformed_token";
    case LENCTL_ERR_EMPTY_REFERENCE: return "empty_reference";
    case LENCTL_ERR_NO_DATA: return "no_data";
    case LENCTL_ERR_PROTOCOL: return "protocol";
    case LENCTL_ERR_IO: return "io";
    case LENCTL_ERR_JUDGE_UNAVAILABLE: return "judge_unavailable";
    case LENCTL_ERR_SCORING_PARSE: return "scoring_parse";
    case LENCTL_ERR_VALIDATION_FAILED: return "validation_failed";
    case LENCTL_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lenctl_last_error(void) { return g_last_error.c_str(); }

size_t lenctl_last_error_line(void) { return g_last_line; }

void lenctl_string_free(char* s) { std::free(s); }

lenctl_status lenctl_config_create(lenctl_config** out) {
  LENCTL_REQUIRE(out, "out is NULL");
  return guarded([&] {
    *out = new lenctl_config{};
    return LENCTL_OK;
  });
}

void lenctl_config_destroy(lenctl_config* config) { delete config; }

lenctl_status lenctl_config_merge_json(lenctl_config* config, const char* text) {
  LENCTL_REQUIRE(config && text, "config or json is NULL");
  return guarded([&] {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw lenctl::Error(lenctl::ErrorKind::kConfig, e.what());
    }
    lenctl::RunConfig merged = lenctl::run_config_from_json(j, config->value);
    merged.check();
    config->value = std::move(merged);
    return LENCTL_OK;
  });
}

lenctl_status lenctl_config_merge_file(lenctl_config* config, const char* path) {
  LENCTL_REQUIRE(config && path, "config or path is NULL");
  return guarded([&] {
    lenctl::RunConfig merged = lenctl::load_run_config(path, config->value);
    merged.check();
    config->value = std::move(merged);
    return LENCTL_OK;
  });
}

lenctl_status lenctl_config_to_json(const lenctl_config* config, char** out) {
  LENCTL_REQUIRE(config && out, "config or out is NULL");
  return guarded([&] {
    put(out, lenctl::to_json(config->value).dump(2));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_config_hash(const lenctl_config* config, char** out) {
  LENCTL_REQUIRE(config && out, "config or out is NULL");
  return guarded([&] {
    put(out, lenctl::config_hash(config->value));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_count_units(const char* text, size_t len, const char* unit, size_t* out) {
  LENCTL_REQUIRE((text || len == 0) && out, "text or out is NULL");
  return guarded([&] {
    *out = lenctl::count_units(std::string_view(text ? text : "", len), unit_arg(unit));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_render_token(const lenctl_config* config, const char* unit,
                                  uint64_t major, uint64_t minor, char** out) {
  LENCTL_REQUIRE(config && out, "config or out is NULL");
  return guarded([&] {
    if (major > UINT32_MAX || minor > UINT32_MAX) {
      return fail(LENCTL_ERR_INVALID_ARGUMENT, "token count out of range");
    }
    const lenctl::SpecialToken token{unit_arg(unit), static_cast<std::uint32_t>(major),
                                     static_cast<std::uint32_t>(minor)};
    put(out, lenctl::render(token, config->value.hansel.rendering));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_strip_tokens(const lenctl_config* config, const char* text, size_t len,
                                  char** out) {
  LENCTL_REQUIRE(config && (text || len == 0) && out, "config, text or out is NULL");
  return guarded([&] {
    put(out, lenctl::strip_tokens(std::string_view(text ? text : "", len),
                                  config->value.hansel.rendering));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_validate_text(const lenctl_config* config, const char* text, size_t len,
                                   int* ok, char** verdict_json) {
  LENCTL_REQUIRE(config && (text || len == 0) && ok, "config, text or ok is NULL");
  return guarded([&] {
    const lenctl::AutomatonVerdict v =
        lenctl::validate(std::string_view(text ? text : "", len), config->value.hansel);
    *ok = v.ok() ? 1 : 0;
    put(verdict_json, lenctl::to_json(v).dump());
    return LENCTL_OK;
  });
}

lenctl_status lenctl_inference_context(const lenctl_config* config, const char* source,
                                       const char* task, int64_t target,
                                       const char* framework, char** out) {
  LENCTL_REQUIRE(config && source && task && framework && out, "NULL argument");
  return guarded([&] {
    const auto t = lenctl::parse_task(task);
    const auto fw = lenctl::parse_framework(framework);
    if (!t) return fail(LENCTL_ERR_INVALID_ARGUMENT, std::string("unknown task '") + task + "'");
    if (!fw) {
      return fail(LENCTL_ERR_INVALID_ARGUMENT,
                  std::string("unknown framework '") + framework + "'");
    }
    put(out, lenctl::build_inference_context(source, *t, target, *fw, config->value.hansel));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_rouge_f1(const char* candidate, const char* reference, const char* variant,
                              int stem, double* out) {
  LENCTL_REQUIRE(candidate && reference && variant && out, "NULL argument");
  return guarded([&] {
    lenctl::RougeVariant v;
    const std::string_view name(variant);
    if (name == "rouge1") v = lenctl::RougeVariant::kRouge1;
    else if (name == "rouge2") v = lenctl::RougeVariant::kRouge2;
    else if (name == "rougeL") v = lenctl::RougeVariant::kRougeL;
    else return fail(LENCTL_ERR_INVALID_ARGUMENT, "unknown ROUGE variant '" + std::string(name) + "'");
    *out = lenctl::rouge(candidate, reference, v, {stem != 0}).f1;
    return LENCTL_OK;
  });
}

lenctl_status lenctl_augment_file(const lenctl_config* config, const char* input,
                                  const char* output, const char* manifest,
                                  char** summary_json) {
  LENCTL_REQUIRE(config && input && output, "config, input or output is NULL");
  return guarded([&] {
    const lenctl::AugmentOutcome r =
        lenctl::run_augment(input, output, opt_path(manifest), config->value);
    put(summary_json, json{{"records", r.records},
                           {"vanilla", r.manifest.vanilla},
                           {"gretel", r.manifest.gretel},
                           {"hansel", r.manifest.hansel},
                           {"warnings", r.manifest.warnings}}
                          .dump());
    return LENCTL_OK;
  });
}

lenctl_status lenctl_validate_file(const lenctl_config* config, const char* input,
                                   char** report_json) {
  LENCTL_REQUIRE(config && input, "config or input is NULL");
  return guarded([&] {
    const lenctl::ValidationSummary s = lenctl::run_validate(input, config->value);
    put(report_json, lenctl::to_json(s).dump());
    if (!s.ok()) {
      const auto& first = s.failures.front();
      std::ostringstream msg;
      msg << s.failures.size() << " of " << s.lines << " records violate the protocol; first at line "
          << first.line;
      if (!first.verdict.violations.empty()) {
        const auto& v = first.verdict.violations.front();
        msg << " offset " << v.position << " (" << lenctl::violation_kind_name(v.kind) << ": "
            << v.detail << ")";
      }
      return fail(LENCTL_ERR_VALIDATION_FAILED, msg.str(), first.line);
    }
    return LENCTL_OK;
  });
}

lenctl_status lenctl_simulate_file(const lenctl_config* config, const char* input,
                                   const char* output, const char* model, char** summary_json) {
  LENCTL_REQUIRE(config && input && output, "config, input or output is NULL");
  return guarded([&] {
    const std::size_t n = lenctl::run_simulate(input, output, config->value, opt_path(model));
    put(summary_json, json{{"generations", n}}.dump());
    return LENCTL_OK;
  });
}

lenctl_status lenctl_evaluate_file(const lenctl_config* config, const char* input,
                                   const char* output, const char* csv, char** summary_json) {
  LENCTL_REQUIRE(config && input && output, "config, input or output is NULL");
  return guarded([&] {
    const lenctl::EvalReport r = lenctl::run_evaluate(input, output, config->value, opt_path(csv));
    put(summary_json, report_json(r).dump());
    if (!r.mae) return fail(LENCTL_ERR_NO_DATA, "no record could be scored");
    return LENCTL_OK;
  });
}

lenctl_status lenctl_sweep_grid_file(const lenctl_config* config, const char* input,
                                     const char* output, const char* csv, char** summary_json) {
  LENCTL_REQUIRE(config && input && output, "config, input or output is NULL");
  return guarded([&] {
    const lenctl::HyperparamGrid grid = lenctl::run_sweep_grid(input, output, config->value);
    if (auto p = opt_path(csv)) lenctl::write_file_atomic(*p, lenctl::grid_csv(grid));
    put(summary_json, json{{"deltas", grid.deltas},
                           {"residuals", grid.residuals},
                           {"mae", grid.mae},
                           {"table", lenctl::format_grid_table(grid)}}
                          .dump());
    return LENCTL_OK;
  });
}

lenctl_status lenctl_sweep_targets_file(const lenctl_config* config, const char* input,
                                        const char* output, const char* frameworks,
                                        const char* model, const char* csv, const char* dat,
                                        char** summary_json) {
  LENCTL_REQUIRE(config && input && output, "config, input or output is NULL");
  return guarded([&] {
    std::vector<lenctl::Framework> fws;
    std::stringstream list(frameworks && *frameworks ? frameworks : "hansel");
    std::string name;
    while (std::getline(list, name, ',')) {
      const auto fw = lenctl::parse_framework(name);
      if (!fw) return fail(LENCTL_ERR_INVALID_ARGUMENT, "unknown framework '" + name + "'");
      fws.push_back(*fw);
    }
    const std::vector<lenctl::TargetSweep> sweeps =
        lenctl::run_sweep_targets(input, output, config->value, fws, opt_path(model));
    if (auto p = opt_path(csv)) lenctl::write_file_atomic(*p, lenctl::target_sweep_csv(sweeps));
    if (auto p = opt_path(dat)) lenctl::write_file_atomic(*p, lenctl::target_sweep_dat(sweeps));
    put(summary_json, json{{"table", lenctl::format_target_table(sweeps)}}.dump());
    return LENCTL_OK;
  });
}

lenctl_status lenctl_stats_file(const lenctl_config* config, const char* input,
                                const char* output, char** summary_json) {
  LENCTL_REQUIRE(config && input, "config or input is NULL");
  return guarded([&] {
    put(summary_json,
        lenctl::to_json(lenctl::run_stats(input, opt_path(output), config->value)).dump());
    return LENCTL_OK;
  });
}

lenctl_status lenctl_train_file(const lenctl_config* config, const char* input,
                                const char* output, char** summary_json) {
  LENCTL_REQUIRE(config && input && output, "config, input or output is NULL");
  return guarded([&] {
    lenctl::run_train(input, output, config->value);
    put(summary_json, json{{"model", output}}.dump());
    return LENCTL_OK;
  });
}

lenctl_status lenctl_judge_file(const lenctl_config* config, const char* input,
                                const char* output, char** summary_json) {
  LENCTL_REQUIRE(config && input && output, "config, input or output is NULL");
  return guarded([&] {
    const lenctl::JudgeSummary s = lenctl::run_judge(input, output, config->value);
    put(summary_json, json{{"scored", s.scored}, {"failed", s.failed}}.dump());
    if (s.failed > 0) {
      return fail(LENCTL_ERR_VALIDATION_FAILED,
                  std::to_string(s.failed) + " records could not be scored");
    }
    return LENCTL_OK;
  });
}

lenctl_status lenctl_synth_file(const char* output, size_t size, uint64_t seed,
                               const char* task) {
  LENCTL_REQUIRE(output, "output is NULL");
  return guarded([&] {
    lenctl::SyntheticCorpusOptions options;
    options.size = size;
    options.seed = seed;
    if (task && *task) {
      const auto t = lenctl::parse_task(task);
      if (!t) return fail(LENCTL_ERR_INVALID_ARGUMENT, std::string("unknown task '") + task + "'");
      options.task = *t;
    }
    lenctl::run_synth(output, options);
    return LENCTL_OK;
  });
}

lenctl_status lenctl_ngram_train_file(const lenctl_config* config, const char* input,
                                      lenctl_ngram** out) {
  LENCTL_REQUIRE(config && input && out, "config, input or out is NULL");
  return guarded([&] {
    *out = new lenctl_ngram(lenctl::train_ngram(lenctl::read_examples(input), config->value));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_ngram_load(const char* path, lenctl_ngram** out) {
  LENCTL_REQUIRE(path && out, "path or out is NULL");
  return guarded([&] {
    json j;
    try {
      j = json::parse(lenctl::read_file(path));
    } catch (const json::parse_error& e) {
      throw lenctl::Error(lenctl::ErrorKind::kParse, std::string(path) + ": " + e.what());
    }
    *out = new lenctl_ngram(lenctl::NgramModel::from_json(j));
    return LENCTL_OK;
  });
}

lenctl_status lenctl_ngram_save(const lenctl_ngram* model, const char* path) {
  LENCTL_REQUIRE(model && path, "model or path is NULL");
  return guarded([&] {
    lenctl::write_file_atomic(path, model->model.to_json().dump() + "\n");
    return LENCTL_OK;
  });
}

lenctl_status lenctl_ngram_generate(const lenctl_ngram* model, const lenctl_config* config,
                                    const char* context, int assisted, uint64_t seed, char** out,
                                    int* hit_cap) {
  LENCTL_REQUIRE(model && config && context && out, "NULL argument");
  return guarded([&] {
    lenctl::GenerateOptions options;
    options.mode = assisted ? lenctl::GenerationMode::kProtocolAssisted
                            : lenctl::GenerationMode::kFree;
    options.max_len = config->value.simulate.max_len;
    options.seed = seed;
    const lenctl::GenerationResult r = model->model.generate(context, config->value.hansel, options);
    put(out, r.text);
    if (hit_cap) *hit_cap = r.hit_cap ? 1 : 0;
    return LENCTL_OK;
  });
}

void lenctl_ngram_destroy(lenctl_ngram* model) { delete model; }

}  // extern "C"
