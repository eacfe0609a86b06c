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

// lenctl command-line front end. Everything goes through the C API.
//
// Exit codes: 0 success, 1 validation or evaluation failure, 2 usage or
// configuration error, 3 input/output error (including malformed input).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lenctl/lenctl.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

int exit_code(lenctl_status status) {
  switch (status) {
    case LENCTL_OK:
      return kExitOk;
    case LENCTL_ERR_INVALID_ARGUMENT:
    case LENCTL_ERR_CONFIG:
      return kExitUsage;
    case LENCTL_ERR_IO:
    case LENCTL_ERR_PARSE:
      return kExitIo;
    default:
      return kExitFailure;
  }
}

struct CString {
  char* p = nullptr;
  ~CString() { lenctl_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

using ConfigPtr = std::unique_ptr<lenctl_config, decltype(&lenctl_config_destroy)>;

// Flags shared across subcommands. Only flags that were given end up in the
// override document, so file values survive unless overridden.
struct Overrides {
  std::string config_file;
  bool quiet = false;

  std::optional<std::uint64_t> seed;
  std::optional<std::string> framework;
  std::optional<std::string> unit;
  std::optional<std::string> units;  // "sentence=5,word=20"
  std::vector<int> deltas;
  std::vector<int> residual_maxes;
  std::optional<double> residual_fraction;
  std::optional<int> mask_n;
  std::optional<double> vanilla_fraction;
  std::optional<double> gretel_fraction;
  std::optional<int> max_tokens;
  std::optional<std::string> full_template;
  std::optional<std::string> compact_template;
  bool no_mix = false;

  std::optional<std::string> mode;
  std::vector<std::int64_t> targets;
  std::optional<int> max_len;
  std::optional<std::string> residual_behavior;
  std::optional<int> threads;
  bool builtin_lexicon = false;

  std::optional<bool> stem;
  std::optional<int> eval_max_tokens;

  std::optional<int> order;
  std::optional<double> alpha;

  std::optional<std::string> stats_unit;

  std::optional<std::string> endpoint;
  std::optional<std::string> judge_model;
  std::optional<std::string> api_key_env;
  std::optional<std::string> cache_dir;
  std::optional<int> max_retries;
  std::optional<double> timeout;
  std::optional<double> temperature;
  std::optional<int> max_in_flight;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_file, "JSON config file (flags override it)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_flag("-q,--quiet", o.quiet, "No timing line on stderr");
}

void add_protocol(CLI::App* cmd, Overrides& o, bool delta_list = false) {
  cmd->add_option("--unit", o.unit, "Length unit: word, sentence or character");
  cmd->add_option("--units", o.units, "Multi-unit families, e.g. sentence=5,word=20");
  if (delta_list) {
    cmd->add_option("--delta", o.deltas, "Token stride(s)")->delimiter(',');
    cmd->add_option("--residual-max", o.residual_maxes, "Residual bound(s)")->delimiter(',');
  } else {
    cmd->add_option("--delta", o.deltas, "Token stride")->expected(1);
    cmd->add_option("--residual-max", o.residual_maxes, "Residual bound")->expected(1);
  }
  cmd->add_option("--max-tokens", o.max_tokens, "Reference truncation in primary units");
  cmd->add_option("--template", o.full_template, "Token template with {unit} {major} {minor}");
  cmd->add_option("--compact-template", o.compact_template, "Token template for minor 0");
}

void add_augment(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--framework", o.framework, "hansel, gretel or vanilla");
  cmd->add_option("--residual-fraction", o.residual_fraction, "Share of records with a residual");
  cmd->add_option("--mask-n", o.mask_n, "Loss-mask width before the terminator");
  cmd->add_option("--vanilla-fraction", o.vanilla_fraction, "Vanilla share of the mix");
  cmd->add_option("--gretel-fraction", o.gretel_fraction, "Gretel share of non-vanilla records");
  cmd->add_flag("--no-mix", o.no_mix, "Every record uses --framework");
}

void add_simulate(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--mode", o.mode, "rule, ngram or ngram-assisted");
  cmd->add_option("--targets", o.targets, "Target lengths (default: reference lengths)")
      ->delimiter(',');
  cmd->add_option("--max-len", o.max_len, "Generation cap in words");
  cmd->add_option("--residual-behavior", o.residual_behavior, "stop_at_zero or finish_sentence");
  cmd->add_option("--threads", o.threads, "Worker threads");
  cmd->add_flag("--builtin-lexicon", o.builtin_lexicon, "Rule follower ignores corpus words");
}

void add_eval(CLI::App* cmd, Overrides& o) {
  cmd->add_flag("--stem,!--no-stem", o.stem, "Porter stemming in ROUGE");
  cmd->add_option("--eval-max-tokens", o.eval_max_tokens, "Word cap for infinite detection");
}

void add_ngram(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--order", o.order, "n-gram order");
  cmd->add_option("--alpha", o.alpha, "Additive smoothing constant");
}

void add_judge(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--endpoint", o.endpoint, "Chat-completions URL");
  cmd->add_option("--judge-model", o.judge_model, "Judge model name");
  cmd->add_option("--api-key-env", o.api_key_env, "Environment variable holding the API key");
  cmd->add_option("--cache-dir", o.cache_dir, "Response cache directory");
  cmd->add_option("--max-retries", o.max_retries, "Retries per request");
  cmd->add_option("--timeout", o.timeout, "Request timeout in seconds");
  cmd->add_option("--temperature", o.temperature, "Sampling temperature");
  cmd->add_option("--max-in-flight", o.max_in_flight, "Concurrent requests");
}

template <typename T>
void set_if(json& j, const std::optional<T>& v, const std::vector<std::string>& path) {
  if (!v) return;
  json* node = &j;
  for (const std::string& key : path) node = &(*node)[key];
  *node = *v;
}

// Builds the override document. `current` is the config after the file
// merge, needed to combine --unit and --delta into a family list.
json override_json(const Overrides& o, const json& current, bool single_delta) {
  json j = json::object();
  set_if(j, o.seed, {"hansel", "seed"});
  set_if(j, o.residual_fraction, {"hansel", "residual_fraction"});
  set_if(j, o.mask_n, {"hansel", "mask_n"});
  set_if(j, o.vanilla_fraction, {"hansel", "vanilla_fraction"});
  set_if(j, o.gretel_fraction, {"hansel", "gretel_within_nonvanilla"});
  set_if(j, o.max_tokens, {"hansel", "max_tokens"});
  set_if(j, o.full_template, {"hansel", "rendering", "full"});
  set_if(j, o.compact_template, {"hansel", "rendering", "compact"});
  if (single_delta && !o.residual_maxes.empty()) {
    j["hansel"]["residual_max"] = o.residual_maxes.front();
  }

  if (o.units) {
    json units = json::array();
    std::stringstream ss(*o.units);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw CLI::ValidationError("--units", "expected unit=delta");
      int delta = 0;
      try {
        delta = std::stoi(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--units", "bad stride in '" + item + "'");
      }
      units.push_back({{"unit", item.substr(0, eq)}, {"delta", delta}});
    }
    j["hansel"]["units"] = units;
  } else if (o.unit || (single_delta && !o.deltas.empty())) {
    json units = current.at("hansel").at("units");
    if (units.size() != 1) {
      throw CLI::ValidationError("--unit/--delta", "use --units with a multi-unit config");
    }
    if (o.unit) units[0]["unit"] = *o.unit;
    if (single_delta && !o.deltas.empty()) units[0]["delta"] = o.deltas.front();
    j["hansel"]["units"] = units;
  }
  if (!single_delta) {
    if (!o.deltas.empty()) j["sweep"]["deltas"] = o.deltas;
    if (!o.residual_maxes.empty()) j["sweep"]["residuals"] = o.residual_maxes;
  }

  set_if(j, o.framework, {"framework"});
  if (o.no_mix) j["mix"] = false;
  set_if(j, o.stats_unit, {"stats_unit"});

  if (o.mode) {
    if (*o.mode == "rule") {
      j["simulate"]["simulator"] = "rule";
    } else if (*o.mode == "ngram") {
      j["simulate"]["simulator"] = "ngram";
      j["simulate"]["mode"] = "free";
    } else if (*o.mode == "ngram-assisted") {
      j["simulate"]["simulator"] = "ngram";
      j["simulate"]["mode"] = "assisted";
    } else {
      throw CLI::ValidationError("--mode", "expected rule, ngram or ngram-assisted");
    }
  }
  if (!o.targets.empty()) j["simulate"]["targets"] = o.targets;
  set_if(j, o.max_len, {"simulate", "max_len"});
  set_if(j, o.residual_behavior, {"simulate", "residual_behavior"});
  set_if(j, o.threads, {"simulate", "threads"});
  if (o.builtin_lexicon) j["simulate"]["corpus_lexicon"] = false;

  set_if(j, o.stem, {"eval", "stem"});
  set_if(j, o.eval_max_tokens, {"eval", "max_tokens"});
  set_if(j, o.order, {"ngram", "order"});
  set_if(j, o.alpha, {"ngram", "alpha"});

  set_if(j, o.endpoint, {"judge", "endpoint"});
  set_if(j, o.judge_model, {"judge", "model"});
  set_if(j, o.api_key_env, {"judge", "api_key_env"});
  set_if(j, o.cache_dir, {"judge", "cache_dir"});
  set_if(j, o.max_retries, {"judge", "max_retries"});
  set_if(j, o.timeout, {"judge", "timeout_seconds"});
  set_if(j, o.temperature, {"judge", "temperature"});
  set_if(j, o.max_in_flight, {"judge", "max_in_flight"});
  return j;
}

class Runner {
 public:
  Runner(std::string command, const Overrides& o) : command_(std::move(command)), o_(o) {}

  int fail(lenctl_status status) const {
    std::cerr << "lenctl " << command_ << ": " << lenctl_status_name(status) << ": "
              << lenctl_last_error() << "\n";
    return exit_code(status);
  }

  // Defaults, then the config file, then flags.
  std::optional<ConfigPtr> effective_config(bool single_delta, int& code) const {
    lenctl_config* raw = nullptr;
    if (lenctl_status s = lenctl_config_create(&raw); s != LENCTL_OK) {
      code = fail(s);
      return std::nullopt;
    }
    ConfigPtr config(raw, &lenctl_config_destroy);
    if (!o_.config_file.empty()) {
      if (lenctl_status s = lenctl_config_merge_file(config.get(), o_.config_file.c_str());
          s != LENCTL_OK) {
        code = fail(s);
        return std::nullopt;
      }
    }
    CString current;
    if (lenctl_status s = lenctl_config_to_json(config.get(), &current.p); s != LENCTL_OK) {
      code = fail(s);
      return std::nullopt;
    }
    json patch;
    try {
      patch = override_json(o_, json::parse(current.str()), single_delta);
    } catch (const CLI::Error& e) {
      std::cerr << "lenctl " << command_ << ": " << e.what() << "\n";
      code = kExitUsage;
      return std::nullopt;
    }
    if (lenctl_status s = lenctl_config_merge_json(config.get(), patch.dump().c_str());
        s != LENCTL_OK) {
      code = fail(s);
      return std::nullopt;
    }
    return config;
  }

  int run(bool single_delta, const std::function<lenctl_status(const lenctl_config*)>& body) {
    int code = kExitOk;
    auto config = effective_config(single_delta, code);
    if (!config) return code;
    const auto start = std::chrono::steady_clock::now();
    const lenctl_status status = body(config->get());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o_.quiet) {
      std::fprintf(stderr, "lenctl %s: %s in %.3f s\n", command_.c_str(),
                   lenctl_status_name(status), seconds);
    }
    if (status != LENCTL_OK) return fail(status);
    return kExitOk;
  }

 private:
  std::string command_;
  const Overrides& o_;
};

const char* nullable(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

void print_summary(const CString& summary, const char* field = nullptr) {
  if (!summary.p) return;
  if (field) {
    const json j = json::parse(summary.str());
    if (j.contains(field)) {
      std::cout << j.at(field).get<std::string>();
      return;
    }
  }
  std::cout << summary.str() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Length-control toolkit: augmentation, validation, simulation and evaluation",
               "lenctl"};
  app.set_version_flag("--version", lenctl_version());
  app.require_subcommand(1);

  Overrides o;
  std::string input, output, manifest, model, csv, dat, report, frameworks;
  bool hash_only = false;
  int code = kExitOk;

  auto* augment = app.add_subcommand("augment", "Build training records from an Example JSONL");
  add_common(augment, o);
  add_protocol(augment, o);
  add_augment(augment, o);
  augment->add_option("--input", input, "Example JSONL")->required();
  augment->add_option("--out", output, "Augmented JSONL")->required();
  augment->add_option("--manifest", manifest, "Manifest path (default: OUT.manifest.json)");
  augment->callback([&] {
    Runner r("augment", o);
    code = r.run(true, [&](const lenctl_config* c) {
      CString summary;
      const lenctl_status s =
          lenctl_augment_file(c, input.c_str(), output.c_str(), nullable(manifest), &summary.p);
      if (s == LENCTL_OK && !o.quiet) std::cerr << summary.str() << "\n";
      return s;
    });
  });

  auto* validate = app.add_subcommand("validate", "Check augmented records against the protocol");
  add_common(validate, o);
  add_protocol(validate, o);
  validate->add_option("--input", input, "Augmented JSONL")->required();
  validate->add_option("--report", report, "Write the JSON report here instead of stdout");
  validate->callback([&] {
    Runner r("validate", o);
    code = r.run(true, [&](const lenctl_config* c) {
      CString out;
      const lenctl_status s = lenctl_validate_file(c, input.c_str(), &out.p);
      if (out.p) {
        const json doc = json::parse(out.str());
        for (const auto& w : doc.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << "\n";
        if (report.empty()) {
          std::cout << doc.dump(2) << "\n";
        } else {
          std::FILE* f = std::fopen(report.c_str(), "wb");
          if (!f) return LENCTL_ERR_IO;
          const std::string text = doc.dump(2) + "\n";
          std::fwrite(text.data(), 1, text.size(), f);
          std::fclose(f);
        }
      }
      return s;
    });
  });

  auto* simulate = app.add_subcommand("simulate", "Generate continuations with a desk-scale model");
  add_common(simulate, o);
  add_protocol(simulate, o);
  add_simulate(simulate, o);
  simulate->add_option("--framework", o.framework, "Prompt framework (hansel, gretel, vanilla)");
  simulate->add_option("--input", input, "Example JSONL")->required();
  simulate->add_option("--out", output, "Generations JSONL")->required();
  simulate->add_option("--model", model, "n-gram model from `lenctl train`");
  simulate->callback([&] {
    Runner r("simulate", o);
    code = r.run(true, [&](const lenctl_config* c) {
      return lenctl_simulate_file(c, input.c_str(), output.c_str(), nullable(model), nullptr);
    });
  });

  auto* evaluate = app.add_subcommand("evaluate", "Score generations: MAE, ROUGE, infinite count");
  add_common(evaluate, o);
  add_protocol(evaluate, o);
  add_eval(evaluate, o);
  evaluate->add_option("--input", input, "Generations JSONL")->required();
  evaluate->add_option("--out", output, "Report JSON")->required();
  evaluate->add_option("--csv", csv, "Per-target MAE table");
  evaluate->callback([&] {
    Runner r("evaluate", o);
    code = r.run(true, [&](const lenctl_config* c) {
      CString summary;
      const lenctl_status s =
          lenctl_evaluate_file(c, input.c_str(), output.c_str(), nullable(csv), &summary.p);
      if (summary.p && !o.quiet) std::cout << summary.str() << "\n";
      return s;
    });
  });

  auto* sweep = app.add_subcommand(
      "sweep",
      "Target sweep, or a delta x residual-max grid when --delta/--residual-max list several "
      "values");
  add_common(sweep, o);
  add_protocol(sweep, o, true);
  add_simulate(sweep, o);
  add_eval(sweep, o);
  add_ngram(sweep, o);
  sweep->add_option("--input", input, "Example JSONL")->required();
  sweep->add_option("--out", output, "Sweep JSON")->required();
  sweep->add_option("--frameworks", frameworks, "Target sweep rows, e.g. hansel,gretel");
  sweep->add_option("--model", model, "n-gram model (default: train per framework)");
  sweep->add_option("--csv", csv, "CSV table");
  bool grid_flag = false;
  sweep->add_flag("--grid", grid_flag, "Force the delta x residual-max grid");
  sweep->add_option("--dat", dat, "Whitespace-separated data file (target sweep only)");
  sweep->callback([&] {
    Runner r("sweep", o);
    const bool grid = grid_flag || o.deltas.size() > 1 || o.residual_maxes.size() > 1;
    code = r.run(!grid, [&](const lenctl_config* c) {
      CString summary;
      lenctl_status s;
      if (grid) {
        s = lenctl_sweep_grid_file(c, input.c_str(), output.c_str(), nullable(csv), &summary.p);
      } else {
        s = lenctl_sweep_targets_file(c, input.c_str(), output.c_str(), nullable(frameworks),
                                      nullable(model), nullable(csv), nullable(dat), &summary.p);
      }
      if (s == LENCTL_OK && !o.quiet) print_summary(summary, "table");
      return s;
    });
  });

  auto* stats = app.add_subcommand("stats", "Reference length statistics of an Example JSONL");
  add_common(stats, o);
  stats->add_option("--input", input, "Example JSONL")->required();
  stats->add_option("--out", output, "Stats JSON (default: stdout only)");
  stats->add_option("--unit", o.stats_unit, "Length unit");
  stats->callback([&] {
    Runner r("stats", o);
    code = r.run(true, [&](const lenctl_config* c) {
      CString summary;
      const lenctl_status s = lenctl_stats_file(c, input.c_str(), nullable(output), &summary.p);
      if (s == LENCTL_OK) std::cout << summary.str() << "\n";
      return s;
    });
  });

  auto* train = app.add_subcommand("train", "Train an n-gram model on a training mix");
  add_common(train, o);
  add_protocol(train, o);
  add_augment(train, o);
  add_ngram(train, o);
  train->add_option("--input", input, "Example JSONL")->required();
  train->add_option("--out", output, "Model JSON")->required();
  train->callback([&] {
    Runner r("train", o);
    code = r.run(true, [&](const lenctl_config* c) {
      return lenctl_train_file(c, input.c_str(), output.c_str(), nullptr);
    });
  });

  auto* judge = app.add_subcommand("judge", "Quality scores from an LLM judge");
  add_common(judge, o);
  add_judge(judge, o);
  judge->add_option("--input", input, "Generations JSONL (needs source and task)")->required();
  judge->add_option("--out", output, "Scores JSONL")->required();
  judge->callback([&] {
    Runner r("judge", o);
    code = r.run(true, [&](const lenctl_config* c) {
      CString summary;
      const lenctl_status s = lenctl_judge_file(c, input.c_str(), output.c_str(), &summary.p);
      if (summary.p && !o.quiet) std::cerr << summary.str() << "\n";
      return s;
    });
  });

  auto* synth = app.add_subcommand("synth", "Write a synthetic template corpus");
  std::size_t synth_size = 1000;
  std::uint64_t synth_seed = 0;
  std::string synth_task = "summarization";
  synth->add_option("--out", output, "Example JSONL")->required();
  synth->add_option("--size", synth_size, "Number of examples");
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--task", synth_task, "summarization or dialogue");
  synth->callback([&] {
    const lenctl_status s =
        lenctl_synth_file(output.c_str(), synth_size, synth_seed, synth_task.c_str());
    if (s != LENCTL_OK) code = Runner("synth", o).fail(s);
  });

  auto* config = app.add_subcommand("config", "Print the effective configuration");
  add_common(config, o);
  add_protocol(config, o);
  add_augment(config, o);
  add_simulate(config, o);
  add_eval(config, o);
  add_ngram(config, o);
  add_judge(config, o);
  config->add_flag("--hash", hash_only, "Print only the config hash");
  config->callback([&] {
    Runner r("config", o);
    int c_code = kExitOk;
    auto cfg = r.effective_config(true, c_code);
    if (!cfg) {
      code = c_code;
      return;
    }
    CString text;
    const lenctl_status s = hash_only ? lenctl_config_hash(cfg->get(), &text.p)
                                    : lenctl_config_to_json(cfg->get(), &text.p);
    if (s != LENCTL_OK) {
      code = r.fail(s);
      return;
    }
    std::cout << text.str() << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  return code;
}
