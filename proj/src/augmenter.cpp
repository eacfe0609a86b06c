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

#include "lenctl/augmenter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "lenctl/error.hpp"
#include "lenctl/random.hpp"
#include "lenctl/token.hpp"

namespace lenctl {

std::string_view framework_name(Framework framework) {
  switch (framework) {
    case Framework::kVanilla: return "vanilla";
    case Framework::kVanillaStar: return "vanilla*";
    case Framework::kGretel: return "gretel";
    case Framework::kHansel: return "hansel";
  }
  return "?";
}

std::optional<Framework> parse_framework(std::string_view text) {
  if (text == "vanilla") return Framework::kVanilla;
  if (text == "vanilla*" || text == "vanilla-star") return Framework::kVanillaStar;
  if (text == "gretel") return Framework::kGretel;
  if (text == "hansel") return Framework::kHansel;
  return std::nullopt;
}

std::string base_prompt(Task task) {
  return task == Task::kDialogue ? "Reply." : "Summarize.";
}

std::string length_prompt(Task task, std::span<const UnitLength> lengths) {
  std::string clause;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (i > 0) clause += (i + 1 == lengths.size()) ? " and " : ", ";
    clause += std::to_string(lengths[i].effective) + " " +
              std::string(unit_plural(lengths[i].unit));
  }
  if (task == Task::kDialogue) return "Reply in " + clause + ".";
  return base_prompt(task) + " Answer in " + clause + ".";
}

Example truncate_reference(const Example& example, const HanselConfig& config,
                           const Segmenter& segmenter) {
  Example out = example;
  out.reference = truncate_units(example.reference, segmenter, config.unit(),
                                 static_cast<std::size_t>(config.max_tokens));
  return out;
}

namespace {

bool blank(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  });
}

std::int64_t primary_length(const Example& example, const HanselConfig& config,
                            const Segmenter& segmenter) {
  if (blank(example.reference)) {
    throw Error(ErrorKind::kEmptyReference,
                "example '" + example.id + "' has an empty reference");
  }
  const auto l = static_cast<std::int64_t>(
      segmenter.count(example.reference, config.unit()));
  if (l == 0) {
    throw Error(ErrorKind::kEmptyReference,
                "example '" + example.id + "' has no countable units");
  }
  return l;
}

AugmentedExample plain_record(const Example& example, Framework framework,
                              std::int64_t length) {
  AugmentedExample rec;
  rec.id = example.id;
  rec.framework = framework;
  rec.source = example.source;
  rec.task = example.task;
  rec.output = example.reference;
  rec.target_length = length;
  rec.effective_length = length;
  rec.residual = 0;
  return rec;
}

struct Placement {
  std::size_t offset;
  int rank;
  std::size_t sequence;
  std::string rendered;
  bool primary_terminator;
};

}  // namespace

AugmentedExample augment_hansel(const Example& example,
                                const HanselConfig& config, int residual,
                                const Segmenter& segmenter) {
  const std::int64_t l = primary_length(example, config, segmenter);
  if (residual < 0 || residual > config.residual_max) {
    throw Error(ErrorKind::kConfig,
                "residual " + std::to_string(residual) + " outside [0, " +
                    std::to_string(config.residual_max) + "]");
  }
  if (residual >= l) {
    throw Error(ErrorKind::kConfig, "residual " + std::to_string(residual) +
                                        " leaves no units before the terminator");
  }

  const std::vector<UnitStride> families = config.ordered_units();
  AugmentedExample rec = plain_record(example, Framework::kHansel, l);
  std::vector<Placement> placements;
  std::size_t sequence = 0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const UnitStride& family = families[f];
    const bool is_primary = f + 1 == families.size();
    const Segmentation seg = segmenter.segment(example.reference, family.unit);
    const auto count = static_cast<std::int64_t>(seg.count());
    if (count == 0) {
      throw Error(ErrorKind::kEmptyReference,
                  "example '" + example.id + "' has no " +
                      std::string(unit_plural(family.unit)));
    }
    const std::int64_t effective = is_primary ? count - residual : count;
    rec.units.push_back({family.unit, count, effective});
    for (const auto& [index, token] :
         placement_schedule(family.unit, effective, family.stride)) {
      placements.push_back(
          {boundary_offset(seg, example.reference.size(),
                           static_cast<std::size_t>(index)),
           static_cast<int>(f), sequence++, render(token, config.rendering),
           is_primary && index == effective});
    }
  }
  std::stable_sort(placements.begin(), placements.end(),
                   [](const Placement& a, const Placement& b) {
                     return std::tie(a.offset, a.rank, a.sequence) <
                            std::tie(b.offset, b.rank, b.sequence);
                   });

  std::string output;
  std::size_t cursor = 0;
  for (const Placement& p : placements) {
    output.append(example.reference, cursor, p.offset - cursor);
    cursor = p.offset;
    if (p.primary_terminator) rec.mask = MaskDirective{output.size(), config.mask_n};
    output += p.rendered;
  }
  output.append(example.reference, cursor, std::string::npos);

  rec.output = std::move(output);
  rec.effective_length = l - residual;
  rec.residual = residual;
  rec.prompt = length_prompt(example.task, rec.units);
  return rec;
}

AugmentedExample augment_multi_unit(const Example& example,
                                    const HanselConfig& config, int residual,
                                    const Segmenter& segmenter) {
  if (config.units.empty()) {
    throw Error(ErrorKind::kConfig, "multi-unit augmentation needs units");
  }
  return augment_hansel(example, config, residual, segmenter);
}

AugmentedExample augment_gretel(const Example& example,
                                const HanselConfig& config,
                                const Segmenter& segmenter) {
  const std::int64_t l = primary_length(example, config, segmenter);
  AugmentedExample rec = plain_record(example, Framework::kGretel, l);
  for (const UnitStride& family : config.ordered_units()) {
    const auto count =
        static_cast<std::int64_t>(segmenter.count(example.reference, family.unit));
    rec.units.push_back({family.unit, count, count});
  }
  rec.prompt = length_prompt(example.task, rec.units);
  return rec;
}

AugmentedExample augment_vanilla(const Example& example,
                                 const HanselConfig& config,
                                 const Segmenter& segmenter) {
  const std::int64_t l = primary_length(example, config, segmenter);
  AugmentedExample rec = plain_record(example, Framework::kVanilla, l);
  rec.units.push_back({config.unit(), l, l});
  rec.prompt = base_prompt(example.task);
  return rec;
}

std::vector<int> assign_residuals(std::span<const Example> corpus,
                                  const HanselConfig& config,
                                  const Segmenter& segmenter) {
  std::vector<int> residuals(corpus.size(), 0);
  if (config.residual_max == 0 || corpus.empty()) return residuals;

  auto rng = seeded_engine(config.seed, RngStream::kResidual);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const auto selected = static_cast<std::size_t>(
      std::llround(config.residual_fraction * static_cast<double>(corpus.size())));

  std::uniform_int_distribution<int> draw(1, config.residual_max);
  for (std::size_t k = 0; k < std::min(selected, order.size()); ++k) {
    const std::size_t i = order[k];
    const int value = draw(rng);
    const auto l = segmenter.count(corpus[i].reference, config.unit());
    if (l >= static_cast<std::size_t>(config.residual_max) + 1) residuals[i] = value;
  }
  return residuals;
}

std::vector<std::size_t> largest_remainder(std::size_t total,
                                           std::span<const double> fractions) {
  constexpr double kEps = 1e-9;
  std::vector<std::size_t> counts(fractions.size(), 0);
  std::vector<double> remainders(fractions.size(), 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double quota = fractions[i] * static_cast<double>(total);
    const double whole = std::floor(quota + kEps);
    counts[i] = static_cast<std::size_t>(whole);
    remainders[i] = std::max(0.0, quota - whole);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(fractions.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b] + kEps;
  });
  for (std::size_t k = 0; assigned < total && !order.empty(); ++k) {
    ++counts[order[k % order.size()]];
    ++assigned;
  }
  while (assigned > total) {
    // Only reachable when fractions sum above 1; trim from the last bucket.
    for (std::size_t i = counts.size(); i-- > 0 && assigned > total;) {
      if (counts[i] > 0) { --counts[i]; --assigned; }
    }
  }
  return counts;
}

nlohmann::json to_json(const MixManifest& manifest) {
  nlohmann::json provenance = nlohmann::json::array();
  for (const ProvenanceEntry& p : manifest.provenance) {
    provenance.push_back({{"id", p.id},
                          {"framework", framework_name(p.framework)},
                          {"residual", p.residual}});
  }
  return {{"target", framework_name(manifest.target)},
          {"total", manifest.total()},
          {"counts",
           {{"vanilla", manifest.vanilla},
            {"gretel", manifest.gretel},
            {"hansel", manifest.hansel}}},
          {"warnings", manifest.warnings},
          {"provenance", provenance}};
}

MixResult compose_mix(std::span<const Example> corpus,
                      const HanselConfig& config, Framework target,
                      const Segmenter& segmenter) {
  if (corpus.empty()) throw Error(ErrorKind::kNoData, "corpus is empty");
  {
    std::set<std::string_view> ids;
    for (const Example& ex : corpus) {
      if (!ids.insert(ex.id).second) {
        throw Error(ErrorKind::kConfig, "duplicate example id '" + ex.id + "'");
      }
    }
  }

  const double vf = config.vanilla_fraction;
  std::vector<double> fractions;
  switch (target) {
    case Framework::kHansel:
      fractions = {vf, (1.0 - vf) * config.gretel_within_nonvanilla,
                   (1.0 - vf) * (1.0 - config.gretel_within_nonvanilla)};
      break;
    case Framework::kGretel:
      fractions = {vf, 1.0 - vf, 0.0};
      break;
    case Framework::kVanilla:
      fractions = {1.0, 0.0, 0.0};
      break;
    case Framework::kVanillaStar:
      throw Error(ErrorKind::kConfig, "vanilla* is an inference-only framework");
  }
  const std::vector<std::size_t> counts = largest_remainder(corpus.size(), fractions);

  MixResult result;
  MixManifest& manifest = result.manifest;
  manifest.target = target;
  static constexpr std::array<std::string_view, 3> kNames{"vanilla", "gretel", "hansel"};
  for (std::size_t b = 0; b < fractions.size(); ++b) {
    const double quota = fractions[b] * static_cast<double>(corpus.size());
    if (std::abs(quota - std::round(quota)) > 1e-9) {
      std::ostringstream msg;
      msg << kNames[b] << " quota " << quota << " rounded to " << counts[b];
      manifest.warnings.push_back(msg.str());
    }
  }

  std::vector<Framework> assignment(corpus.size(), Framework::kHansel);
  {
    auto rng = seeded_engine(config.seed, RngStream::kMix);
    std::vector<std::size_t> order(corpus.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::size_t k = 0;
    for (; k < counts[0]; ++k) assignment[order[k]] = Framework::kVanilla;
    for (; k < counts[0] + counts[1]; ++k) assignment[order[k]] = Framework::kGretel;
  }
  const std::vector<int> residuals = assign_residuals(corpus, config, segmenter);

  result.records.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Example& ex = corpus[i];
    int residual = 0;
    switch (assignment[i]) {
      case Framework::kVanilla:
        result.records.push_back(augment_vanilla(ex, config, segmenter));
        ++manifest.vanilla;
        break;
      case Framework::kGretel:
        result.records.push_back(augment_gretel(ex, config, segmenter));
        ++manifest.gretel;
        break;
      default:
        residual = residuals[i];
        result.records.push_back(augment_hansel(ex, config, residual, segmenter));
        ++manifest.hansel;
        break;
    }
    manifest.provenance.push_back({ex.id, assignment[i], residual});
  }
  return result;
}

std::string build_inference_context(std::string_view source, Task task,
                                    std::span<const std::int64_t> targets,
                                    Framework framework,
                                    const HanselConfig& config) {
  const std::vector<UnitStride> families = config.ordered_units();
  if (targets.size() != families.size()) {
    throw Error(ErrorKind::kConfig, "one target length per configured unit is required");
  }
  std::vector<UnitLength> lengths;
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (targets[i] < 1) throw Error(ErrorKind::kConfig, "target length must be at least 1");
    lengths.push_back({families[i].unit, targets[i], targets[i]});
  }
  std::string context(source);
  if (!context.empty()) context += "\n\n";
  if (framework == Framework::kVanilla) {
    context += base_prompt(task);
    return context;
  }
  context += length_prompt(task, lengths);
  if (framework == Framework::kHansel) {
    context += ' ';
    for (std::size_t i = 0; i < families.size(); ++i) {
      context += render(token_for_remaining(families[i].unit, targets[i],
                                            families[i].stride),
                        config.rendering);
    }
  }
  return context;
}

std::string build_inference_context(std::string_view source, Task task,
                                    std::int64_t target_length,
                                    Framework framework,
                                    const HanselConfig& config) {
  const std::int64_t targets[] = {target_length};
  HanselConfig single = config;
  single.units = {config.primary()};
  return build_inference_context(source, task, targets, framework, single);
}

nlohmann::json to_json(const AugmentedExample& record) {
  std::string unit;
  for (const UnitLength& u : record.units) {
    if (!unit.empty()) unit += ',';
    unit += unit_name(u.unit);
  }
  nlohmann::json j{{"id", record.id},
                   {"framework", framework_name(record.framework)},
                   {"task", task_name(record.task)},
                   {"source", record.source},
                   {"prompt", record.prompt},
                   {"output", record.output},
                   {"target_length", record.target_length},
                   {"effective_length", record.effective_length},
                   {"residual", record.residual},
                   {"mask_anchor", nullptr},
                   {"unit", unit}};
  if (record.mask) {
    j["mask_anchor"] = record.mask->anchor;
    j["mask_n"] = record.mask->n;
  }
  if (record.units.size() > 1) {
    nlohmann::json lengths = nlohmann::json::object();
    for (const UnitLength& u : record.units) {
      lengths[std::string(unit_name(u.unit))] = {{"target", u.target},
                                                 {"effective", u.effective}};
    }
    j["unit_lengths"] = lengths;
  }
  return j;
}

AugmentedExample augmented_from_json(const nlohmann::json& j) {
  AugmentedExample rec;
  try {
    rec.id = j.at("id").get<std::string>();
    const auto fw = parse_framework(j.at("framework").get<std::string>());
    if (!fw) throw Error(ErrorKind::kParse, "unknown framework");
    rec.framework = *fw;
    rec.source = j.value("source", std::string{});
    if (auto task = parse_task(j.value("task", std::string{"summarization"}))) {
      rec.task = *task;
    }
    rec.prompt = j.value("prompt", std::string{});
    rec.output = j.at("output").get<std::string>();
    rec.target_length = j.value("target_length", std::int64_t{0});
    rec.effective_length = j.value("effective_length", rec.target_length);
    rec.residual = j.value("residual", std::int64_t{0});
    if (j.contains("mask_anchor") && !j.at("mask_anchor").is_null()) {
      rec.mask = MaskDirective{j.at("mask_anchor").get<std::size_t>(),
                               j.value("mask_n", 10)};
    }
    std::stringstream units(j.value("unit", std::string{"word"}));
    std::string name;
    while (std::getline(units, name, ',')) {
      const auto unit = parse_unit(name);
      if (!unit) throw Error(ErrorKind::kParse, "unknown unit '" + name + "'");
      UnitLength ul{*unit, rec.target_length, rec.effective_length};
      if (j.contains("unit_lengths") && j["unit_lengths"].contains(name)) {
        ul.target = j["unit_lengths"][name].value("target", ul.target);
        ul.effective = j["unit_lengths"][name].value("effective", ul.effective);
      }
      rec.units.push_back(ul);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("bad augmented record: ") + e.what());
  }
  return rec;
}

}  // namespace lenctl
