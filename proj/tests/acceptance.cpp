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

// Acceptance runner. Prints one PASS or FAIL line per criterion and exits
// non-zero if any criterion fails. Thresholds are fixed here on purpose; do
// not loosen them to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "lenctl/augmenter.hpp"
#include "lenctl/desk_lm.hpp"
#include "lenctl/eval.hpp"
#include "lenctl/pipeline.hpp"
#include "lenctl/token.hpp"
#include "lenctl/validator.hpp"
#include "mutations.hpp"
#include "test_util.hpp"

namespace lenctl::acceptance {
namespace {

using nlohmann::json;
using testing::fixture;
using testing::run_cli;
using testing::ScratchDir;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

HanselConfig word_config(int stride, int residual_max) {
  HanselConfig c;
  c.units = {{LengthUnit::kWord, stride}};
  c.residual_max = residual_max;
  return c;
}

std::vector<std::size_t> word_positions(const std::string& output) {
  std::vector<std::size_t> out;
  for (const auto& t : testing::placed_tokens(parse_stream(output))) out.push_back(t.word);
  return out;
}

// --- criteria ----------------------------------------------------------------

Outcome golden() {
  const auto start = Clock::now();
  const json g = json::parse(testing::slurp(fixture("cnndm_golden.json")));
  const Example ex = read_examples(fixture("cnndm_highlight.jsonl")).at(0);
  std::string detail;
  bool ok = true;
  for (const json& c : g.at("cases")) {
    const int residual = c.at("residual");
    const auto rec = augment_hansel(ex, word_config(g.at("delta"), residual), residual);
    const bool bytes = rec.output == c.at("output").get<std::string>();
    const auto positions = word_positions(rec.output);
    const bool places = positions == c.at("positions").get<std::vector<std::size_t>>();
    ok &= bytes && places;
    detail += "residual " + std::to_string(residual) + ": positions {";
    for (std::size_t i = 1; i < positions.size(); ++i) {
      detail += (i > 1 ? "," : "") + std::to_string(positions[i]);
    }
    detail += std::string("} ") + (bytes ? "byte-exact" : "BYTES DIFFER") + "; ";
  }
  const double t = seconds_since(start);
  ok &= t < 1.0;
  return {ok, detail + "time " + fmt(t, 3) + " s (limit 1 s)"};
}

Outcome agreement() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20260501);
  const int strides[] = {10, 20, 40};
  const int deltas[] = {0, 1, 3, 5};
  std::size_t valid = 0, rejected = 0;
  constexpr std::size_t kRecords = 10000;
  std::map<std::string, std::size_t> escaped;
  for (std::size_t i = 0; i < kRecords; ++i) {
    const int len = 1 + static_cast<int>(rng() % 200);
    const int stride = strides[rng() % 3];
    const int delta = deltas[rng() % 4];
    const int residual =
        delta == 0 ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(delta, len - 1) + 1));
    const HanselConfig c = word_config(stride, delta);
    const Example ex{"r" + std::to_string(i), "",
                     synthetic_reference(len, 77, static_cast<std::uint64_t>(i)),
                     Task::kSummarization, {}};
    const std::string out = augment_hansel(ex, c, residual).output;
    if (validate(out, c).ok()) ++valid;
    const std::size_t n_tokens = parse_stream(out).tokens.size();
    const auto kind = testing::kAllMutations[rng() % std::size(testing::kAllMutations)];
    const std::string bad = testing::mutate(out, kind, rng() % n_tokens, stride);
    if (!validate(bad, c).ok()) {
      ++rejected;
    } else {
      ++escaped[testing::mutation_name(kind)];
    }
  }
  const double t = seconds_since(start);
  std::string detail = std::to_string(valid) + "/" + std::to_string(kRecords) + " valid, " +
                       std::to_string(rejected) + "/" + std::to_string(kRecords) +
                       " mutants rejected";
  for (const auto& [k, n] : escaped) detail += " [" + k + " escaped x" + std::to_string(n) + "]";
  return {valid == kRecords && rejected == kRecords && t < 30.0,
          detail + "; time " + fmt(t, 2) + " s (limit 30 s)"};
}

Outcome residual_statistics() {
  constexpr std::size_t kN = 50000;
  constexpr int kDelta = 5;
  std::vector<Example> docs(kN);
  for (std::size_t i = 0; i < kN; ++i) {
    docs[i] = {"d" + std::to_string(i), "", "a b c d e f g h i j", Task::kSummarization, {}};
  }
  HanselConfig c = word_config(20, kDelta);
  c.residual_fraction = 0.20;

  const auto histogram = [&](std::uint64_t seed) {
    c.seed = seed;
    std::array<std::size_t, kDelta + 1> h{};
    for (int r : assign_residuals(docs, c)) ++h.at(static_cast<std::size_t>(r));
    return h;
  };

  bool ok = true;
  std::string detail;
  const auto h0 = histogram(0);
  const std::size_t selected = kN - h0[0];
  ok &= selected == 10000;  // round(0.20 * N), every reference is long enough
  detail = "selected " + std::to_string(selected) + "/10000; shares";
  for (int v = 1; v <= kDelta; ++v) {
    const double share = static_cast<double>(h0[v]) / kN;
    ok &= std::abs(share - 0.04) <= 0.003;
    detail += " " + std::to_string(v) + ":" + fmt(100 * share, 2) + "%";
  }
  double min_p = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto h = histogram(seed);
    const double expected = static_cast<double>(kN - h[0]) / kDelta;
    double chi2 = 0.0;
    for (int v = 1; v <= kDelta; ++v) chi2 += std::pow(h[v] - expected, 2) / expected;
    const double p = boost::math::gamma_q((kDelta - 1) / 2.0, chi2 / 2.0);
    min_p = std::min(min_p, p);
  }
  ok &= min_p > 0.01;
  return {ok, detail + "; min chi-square p over 20 seeds " + fmt(min_p, 4) + " (> 0.01)"};
}

Outcome mix_ratios() {
  SyntheticCorpusOptions o;
  o.size = 1000;
  const auto docs = synthetic_corpus(o);
  const MixResult mix = compose_mix(docs, HanselConfig{}, Framework::kHansel);
  std::map<Framework, std::size_t> counted;
  for (const auto& r : mix.records) ++counted[r.framework];
  const bool ok = mix.manifest.vanilla == 200 && mix.manifest.gretel == 160 &&
                  mix.manifest.hansel == 640 && counted[Framework::kVanilla] == 200 &&
                  counted[Framework::kGretel] == 160 && counted[Framework::kHansel] == 640;
  return {ok, std::to_string(counted[Framework::kVanilla]) + " vanilla / " +
                  std::to_string(counted[Framework::kGretel]) + " gretel / " +
                  std::to_string(counted[Framework::kHansel]) + " hansel"};
}

Outcome rule_follower() {
  bool ok = true;
  std::string detail;
  RuleFollowerConfig f;
  f.residual_behavior = ResidualBehavior::kFinishSentence;
  for (int delta : {0, 1, 3, 5}) {
    const HanselConfig c = word_config(20, delta);
    std::int64_t worst = 0, total = 0;
    for (std::int64_t target = 1; target <= 200; ++target) {
      const std::string ctx =
          build_inference_context("Source.", Task::kSummarization, target, Framework::kHansel, c);
      const auto r = rule_follow(ctx, c, f, static_cast<std::uint64_t>(target));
      const auto n = static_cast<std::int64_t>(count_units(strip_tokens(r.text), LengthUnit::kWord));
      const std::int64_t err = std::llabs(n - target);
      worst = std::max(worst, err);
      total += err;
    }
    ok &= worst <= delta;
    if (delta == 0) ok &= total == 0;
    detail += "delta " + std::to_string(delta) + ": max err " + std::to_string(worst) + ", MAE " +
              fmt(static_cast<double>(total) / 200.0, 3) + "; ";
  }
  return {ok, detail};
}

Outcome dominance() {
  const auto start = Clock::now();
  const std::vector<std::int64_t> targets{5, 20, 50, 80, 130};
  constexpr int kSeeds = 20;
  std::map<std::int64_t, std::vector<double>> hansel, gretel;
  for (int seed = 0; seed < kSeeds; ++seed) {
    SyntheticCorpusOptions o;
    o.size = 1500;
    o.seed = static_cast<std::uint64_t>(seed);
    const auto docs = synthetic_corpus(o);
    RunConfig rc;
    rc.hansel.seed = static_cast<std::uint64_t>(seed);
    rc.simulate.simulator = SimulatorKind::kNgram;
    rc.simulate.mode = GenerationMode::kFree;
    rc.simulate.targets = targets;
    for (Framework fw : {Framework::kHansel, Framework::kGretel}) {
      rc.framework = fw;
      const NgramModel model = train_ngram(docs, rc);
      const auto lines = simulate(docs, rc, &model);
      for (std::int64_t t : targets) {
        std::vector<GenerationLine> subset;
        for (const auto& g : lines) {
          if (g.target_length == t) subset.push_back(g);
        }
        const EvalReport rep = evaluate_generations(subset, rc);
        const double m = rep.mae.value_or(std::numeric_limits<double>::infinity());
        (fw == Framework::kHansel ? hansel : gretel)[t].push_back(m);
      }
    }
  }
  bool ok = true;
  std::string detail;
  for (std::int64_t t : targets) {
    double mh = 0, mg = 0;
    int wins = 0, losses = 0;
    for (int s = 0; s < kSeeds; ++s) {
      mh += hansel[t][s] / kSeeds;
      mg += gretel[t][s] / kSeeds;
      wins += hansel[t][s] < gretel[t][s];
      losses += hansel[t][s] > gretel[t][s];
    }
    ok &= mh <= mg;
    detail += std::to_string(t) + ": " + fmt(mh, 2) + " vs " + fmt(mg, 2);
    if (t >= 80) {
      const int n = wins + losses;
      const double p = n == 0 ? 1.0
                              : boost::math::cdf(boost::math::complement(
                                    boost::math::binomial(n, 0.5), wins - 1));
      ok &= mh < mg && p < 0.05;
      detail += " (sign " + std::to_string(wins) + "/" + std::to_string(n) + ", p " + fmt(p, 6) + ")";
    }
    detail += "; ";
  }
  const double t = seconds_since(start);
  ok &= t < 300.0;
  return {ok, "hansel vs gretel MAE over 20 seeds, " + detail + "time " + fmt(t, 1) +
                  " s (limit 300 s)"};
}

Outcome rouge_oracle() {
  const auto texts = testing::read_lines(fixture("rouge_texts.txt"));
  bool ok = texts.size() == 200;
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& a : texts) {
    ok &= testing::ascii_tokens(a).size() <= 10;
    for (const auto& b : texts) {
      const double got = rouge(a, b, RougeVariant::kRougeL).f1;
      worst = std::max(worst, std::abs(got - testing::oracle_rouge_l_f1(a, b)));
      ++pairs;
    }
  }
  ok &= worst <= 1e-12;
  return {ok, std::to_string(pairs) + " ordered pairs, max |diff| " + fmt(worst, 16) +
                  " (tolerance 1e-12)"};
}

EvalRecord length_record(std::size_t words, std::int64_t target) {
  EvalRecord r;
  for (std::size_t i = 0; i < words; ++i) r.generated += (i ? " w" : "w") + std::to_string(i);
  r.target_length = target;
  return r;
}

Outcome mae_cases() {
  const std::vector<EvalRecord> a{length_record(5, 5), length_record(10, 12)};
  const std::vector<EvalRecord> exact{length_record(5, 5), length_record(10, 10)};
  const double m1 = mae(a), m0 = mae(exact);
  std::mt19937_64 rng(5);
  std::vector<EvalRecord> recs;
  for (int i = 0; i < 100; ++i) recs.push_back(length_record(rng() % 80, static_cast<std::int64_t>(rng() % 80)));
  const double base = mae(recs);
  int stable = 0;
  for (int k = 0; k < 1000; ++k) {
    std::shuffle(recs.begin(), recs.end(), rng);
    stable += mae(recs) == base;
  }
  return {m1 == 1.0 && m0 == 0.0 && stable == 1000,
          "[5,10] vs [5,12] -> " + fmt(m1, 3) + ", exact -> " + fmt(m0, 3) + ", " +
              std::to_string(stable) + "/1000 shuffles identical"};
}

Outcome infinite_accounting() {
  const HanselConfig c;
  const InfiniteOptions inf;
  std::vector<EvalRecord> recs;
  const std::set<int> planted{17, 58, 91};
  for (int i = 0; i < 100; ++i) {
    const std::int64_t target = 10 + i % 40;
    std::string text;
    if (planted.count(i)) {
      text = "It began well. ";
      for (int k = 0; k < 40; ++k) text += "and then the story went on ";
    } else {
      text = synthetic_reference(static_cast<int>(target + i % 5 - 2), 13, static_cast<std::uint64_t>(i));
    }
    recs.push_back(make_eval_record("r" + std::to_string(i), text, target, "", c, inf));
  }
  const EvalReport rep = evaluate(recs);
  std::vector<EvalRecord> kept;
  bool flags_match = true;
  for (int i = 0; i < 100; ++i) {
    flags_match &= recs[i].infinite_flag == (planted.count(i) > 0);
    if (!planted.count(i)) kept.push_back(recs[i]);
  }
  const double recomputed = mae(kept);
  const bool ok = rep.n_infinite == 3 && rep.n_scored == 97 && flags_match && rep.mae &&
                  *rep.mae == recomputed;
  return {ok, "n_infinite " + std::to_string(rep.n_infinite) + ", n_scored " +
                  std::to_string(rep.n_scored) + ", MAE " + fmt(rep.mae.value_or(-1), 4) +
                  " = recomputed without flagged " + fmt(recomputed, 4)};
}

Outcome sweep_grid(const ScratchDir& dir) {
  const std::string syn = (dir / "grid_syn.jsonl").string();
  const std::string out = (dir / "grid.json").string();
  if (run_cli({"synth", "--out", syn, "--size", "300", "--seed", "1"}).exit_code != 0) {
    return {false, "synth failed"};
  }
  const auto r = run_cli({"sweep", "-q", "--input", syn, "--out", out, "--delta", "10,20,40",
                          "--residual-max", "0,1,3,5"});
  if (r.exit_code != 0) return {false, "sweep exited " + std::to_string(r.exit_code)};
  const json g = json::parse(testing::slurp(out));
  const auto rows = g.at("mae");
  bool ok = g.at("deltas") == json({10, 20, 40}) && g.at("residuals") == json({0, 1, 3, 5}) &&
            rows.size() == 3;
  std::size_t cells = 0;
  std::string detail;
  for (const auto& row : rows) {
    ok &= row.size() == 4;
    detail += "[";
    for (std::size_t k = 0; k < row.size(); ++k) {
      ++cells;
      if (k > 0) ok &= row[k].get<double>() >= row[k - 1].get<double>();
      detail += (k ? " " : "") + fmt(row[k].get<double>(), 2);
    }
    detail += "]";
  }
  ok &= cells == 12;
  return {ok, std::to_string(cells) + " cells, rows by delta 10/20/40: " + detail};
}

Outcome corpus_stats_check() {
  const auto r = run_cli({"stats", "-q", "--input", fixture("dialog_format.jsonl").string()});
  if (r.exit_code != 0) return {false, "stats exited " + std::to_string(r.exit_code)};
  const json s = json::parse(r.out);
  bool ok = s.at("count") == 6205;
  std::string detail = "fixture count " + s.at("count").dump();
  if (const char* real = std::getenv("LENCTL_DAILYDIALOG_TEST"); real && *real) {
    const auto rr = run_cli({"stats", "-q", "--input", real});
    if (rr.exit_code != 0) return {false, detail + "; real set: stats exited " + std::to_string(rr.exit_code)};
    const json rs = json::parse(rr.out);
    const double mean = rs.at("mean"), sd = rs.at("std");
    ok &= std::abs(mean - 11.73) <= 0.01 && std::abs(sd - 9.38) <= 0.01;
    detail += "; real set mean " + fmt(mean, 2) + " std " + fmt(sd, 2) + " (11.73 / 9.38 +- 0.01)";
  } else {
    detail += "; real test set not supplied (LENCTL_DAILYDIALOG_TEST unset), optional check skipped";
  }
  return {ok, detail};
}

Outcome determinism(const ScratchDir& dir) {
  std::vector<std::string> checked;
  std::vector<std::string> differing;
  const auto p = [&](const std::string& name) { return (dir / name).string(); };
  if (run_cli({"synth", "--out", p("det_syn.jsonl"), "--size", "300", "--seed", "6"}).exit_code != 0) {
    return {false, "synth failed"};
  }
  struct Step {
    std::string name;
    std::vector<std::string> args;  // "@" marks the per-run suffix
    std::vector<std::string> outputs;
    bool use_stdout = false;
  };
  const std::string in = p("det_syn.jsonl");
  const std::vector<Step> steps{
      {"synth", {"synth", "--out", "@syn.jsonl", "--size", "200", "--seed", "3"}, {"syn.jsonl"}},
      {"augment", {"augment", "-q", "--seed", "5", "--input", in, "--out", "@aug.jsonl"},
       {"aug.jsonl", "aug.jsonl.manifest.json"}},
      {"validate", {"validate", "-q", "--input", p("ref_aug.jsonl"), "--report", "@val.json"},
       {"val.json"}},
      {"train", {"train", "-q", "--seed", "5", "--input", in, "--out", "@model.json"}, {"model.json"}},
      {"simulate-rule", {"simulate", "-q", "--seed", "5", "--input", in, "--out", "@rule.jsonl"},
       {"rule.jsonl", "rule.jsonl.run.json"}},
      {"simulate-ngram",
       {"simulate", "-q", "--seed", "5", "--mode", "ngram", "--model", p("ref_model.json"),
        "--targets", "5,50", "--input", in, "--out", "@ng.jsonl"},
       {"ng.jsonl", "ng.jsonl.run.json"}},
      {"evaluate", {"evaluate", "-q", "--input", p("ref_ng.jsonl"), "--out", "@eval.json", "--csv",
                    "@eval.csv"},
       {"eval.json", "eval.csv"}},
      {"sweep-grid", {"sweep", "-q", "--input", in, "--out", "@grid.json", "--delta", "10,20",
                      "--residual-max", "0,3"},
       {"grid.json"}},
      {"sweep-targets", {"sweep", "-q", "--seed", "2", "--mode", "ngram", "--frameworks",
                         "hansel,gretel", "--input", in, "--out", "@ts.json", "--csv", "@ts.csv"},
       {"ts.json", "ts.csv"}},
      {"stats", {"stats", "-q", "--input", in, "--out", "@stats.json"}, {"stats.json"}},
      {"config", {"config", "-q", "--seed", "5"}, {}, true},
  };
  for (const Step& step : steps) {
    std::vector<std::string> digests;
    for (const std::string prefix : {"ref_", "again_"}) {
      std::vector<std::string> args;
      for (const auto& a : step.args) args.push_back(a.starts_with("@") ? p(prefix + a.substr(1)) : a);
      const auto r = run_cli(args);
      std::string d = "exit " + std::to_string(r.exit_code) + ";";
      if (step.use_stdout) d += sha256_hex(r.out);
      for (const auto& o : step.outputs) d += testing::file_digest(dir / (prefix + o)) + ";";
      digests.push_back(d);
      if (r.exit_code != 0) differing.push_back(step.name + " (exit " + std::to_string(r.exit_code) + ")");
    }
    checked.push_back(step.name);
    if (digests[0] != digests[1]) differing.push_back(step.name);
  }
  std::string detail = std::to_string(checked.size()) + " commands run twice, SHA-256 of outputs";
  if (differing.empty()) {
    detail += " identical";
  } else {
    detail += "; mismatched:";
    for (const auto& d : differing) detail += " " + d;
  }
  return {differing.empty(), detail};
}

}  // namespace
}  // namespace lenctl::acceptance

int main() {
  using namespace lenctl::acceptance;
  ScratchDir dir("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"golden-placement", golden},
      {"augment-validate-agreement", agreement},
      {"residual-sampling", residual_statistics},
      {"mix-ratios", mix_ratios},
      {"rule-follower-oracle", rule_follower},
      {"extrapolation-dominance", dominance},
      {"rougeL-oracle", rouge_oracle},
      {"mae-cases", mae_cases},
      {"infinite-accounting", infinite_accounting},
      {"sweep-grid-shape", [&] { return sweep_grid(dir); }},
      {"corpus-stats", corpus_stats_check},
      {"determinism", [&] { return determinism(dir); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
