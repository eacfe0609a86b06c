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

#include "lenctl/desk_lm.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

#include <boost/container_hash/hash.hpp>

#include "lenctl/error.hpp"
#include "lenctl/random.hpp"
#include "lenctl/token.hpp"

namespace lenctl {

namespace {

const std::vector<std::string>& filler_lexicon() {
  static const std::vector<std::string> kWords = {
      "the",    "report", "city",   "people", "said",   "new",    "plan",
      "water",  "school", "market", "river",  "team",   "year",   "local",
      "early",  "small",  "open",   "quiet",  "moved",  "found",  "built",
      "after",  "before", "during", "near",   "many",   "some",   "road",
      "garden", "train",  "museum", "summer", "winter", "budget", "council",
      "storm",  "bridge", "harbor", "office", "village"};
  return kWords;
}

struct OpeningToken {
  SpecialToken token;
  std::size_t offset = 0;
};

std::optional<OpeningToken> trailing_word_token(std::string_view context,
                                                const TokenRendering& rendering) {
  std::size_t end = context.size();
  while (end > 0 && std::isspace(static_cast<unsigned char>(context[end - 1]))) --end;
  const ParsedStream parsed = parse_stream(context.substr(0, end), rendering);
  for (auto it = parsed.tokens.rbegin(); it != parsed.tokens.rend(); ++it) {
    if (it->offset + it->length != end) {
      // Tokens of coarser families may precede the word token directly.
      if (it == parsed.tokens.rbegin()) break;
    }
    if (it->token.unit == LengthUnit::kWord) {
      // Only tokens in the trailing run count as the generation prefix.
      std::size_t run_end = it->offset + it->length;
      bool contiguous = true;
      for (auto jt = it.base(); jt != parsed.tokens.end(); ++jt) {
        if (jt->offset != run_end) { contiguous = false; break; }
        run_end = jt->offset + jt->length;
      }
      if (contiguous && run_end == end) return OpeningToken{it->token, it->offset};
      break;
    }
  }
  return std::nullopt;
}

int word_stride(const HanselConfig& config) {
  for (const UnitStride& u : config.units) {
    if (u.unit == LengthUnit::kWord) return u.stride;
  }
  throw Error(ErrorKind::kProtocol, "no word-unit stride configured");
}

// Words joined by single spaces; a token sits directly before the word at
// its index, or at the very end.
std::string render_stream(const std::vector<std::string>& words,
                          const std::multimap<std::size_t, std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i <= words.size(); ++i) {
    if (i > 0 && i < words.size()) out += ' ';
    const auto [lo, hi] = tokens.equal_range(i);
    for (auto it = lo; it != hi; ++it) out += it->second;
    if (i < words.size()) out += words[i];
  }
  return out;
}

std::string strip_word_punctuation(std::string_view word) {
  std::string out;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80 || c == '-' || c == '\'') {
      out.push_back(static_cast<char>(std::tolower(u)));
    }
  }
  return out;
}

}  // namespace

RuleFollowerConfig rule_follower_from_corpus(std::span<const Example> corpus,
                                             RuleFollowerConfig base) {
  std::set<std::string> lexicon;
  std::vector<int> lengths;
  for (const Example& ex : corpus) {
    const Segmentation words = segment(ex.reference, LengthUnit::kWord);
    for (const Span& s : words.spans) {
      std::string w = strip_word_punctuation(
          std::string_view(ex.reference).substr(s.begin, s.end - s.begin));
      if (!w.empty()) lexicon.insert(std::move(w));
    }
    for (const Span& s : segment(ex.reference, LengthUnit::kSentence).spans) {
      lengths.push_back(static_cast<int>(count_units(
          std::string_view(ex.reference).substr(s.begin, s.end - s.begin),
          LengthUnit::kWord)));
    }
  }
  base.lexicon.assign(lexicon.begin(), lexicon.end());
  base.sentence_lengths = std::move(lengths);
  return base;
}

GenerationResult rule_follow(std::string_view context,
                             const HanselConfig& config,
                             const RuleFollowerConfig& follower,
                             std::uint64_t salt) {
  const auto opening = trailing_word_token(context, config.rendering);
  if (!opening) {
    throw Error(ErrorKind::kProtocol, "context does not end with a word-unit opening token");
  }
  const int stride = word_stride(config);
  std::int64_t announced = 0;
  try {
    announced = remaining(opening->token, stride);
  } catch (const Error& e) {
    throw Error(ErrorKind::kProtocol, e.what());
  }

  const std::vector<std::string>& lexicon =
      follower.lexicon.empty() ? filler_lexicon() : follower.lexicon;
  auto rng = seeded_engine(follower.seed, RngStream::kRuleFollower, salt);
  std::uniform_int_distribution<std::size_t> pick_word(0, lexicon.size() - 1);
  const auto draw_sentence = [&]() -> int {
    if (!follower.sentence_lengths.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, follower.sentence_lengths.size() - 1);
      return std::max(1, follower.sentence_lengths[pick(rng)]);
    }
    std::uniform_int_distribution<int> len(std::max(1, follower.sentence_min),
                                           std::max(follower.sentence_min, follower.sentence_max));
    return len(rng);
  };

  std::vector<std::string> words;
  int sentence_left = 0;
  bool sentence_closed = true;
  const auto emit_word = [&] {
    if (sentence_left == 0) sentence_left = draw_sentence();
    std::string w = lexicon[pick_word(rng)];
    if (sentence_closed && !w.empty()) {
      w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    }
    --sentence_left;
    sentence_closed = sentence_left == 0;
    if (sentence_closed) w += '.';
    words.push_back(std::move(w));
  };

  for (std::int64_t i = 0; i < announced; ++i) emit_word();
  if (follower.residual_behavior == ResidualBehavior::kFinishSentence) {
    for (int extra = 0; extra < config.residual_max && !sentence_closed; ++extra) {
      emit_word();
    }
  }

  std::multimap<std::size_t, std::string> tokens;
  for (const ScheduledToken& s : placement_schedule(LengthUnit::kWord, announced, stride)) {
    if (s.index == 0) continue;  // the opening token lives in the context
    tokens.emplace(static_cast<std::size_t>(s.index), render(s.token, config.rendering));
  }
  return {render_stream(words, tokens), false};
}

// --- n-gram ----------------------------------------------------------------

std::uint32_t Clock::encode(std::uint32_t cap) const {
  const std::uint32_t c = std::min({count, cap, 0xFFFFu});
  const std::uint32_t m = std::min(minor, 0x3FFFu);
  return (static_cast<std::uint32_t>(phase) << 30) | (m << 16) | c;
}

std::size_t NgramModel::KeyHash::operator()(const std::vector<std::uint32_t>& key) const {
  return boost::hash_range(key.begin(), key.end());
}

namespace {

struct StreamItem {
  bool special = false;
  std::string word;
  SpecialToken token;
};

// Output text as an ordered list of words and word-unit special tokens.
std::vector<StreamItem> stream_items(std::string_view text,
                                     const TokenRendering& rendering) {
  const ParsedStream parsed = parse_stream(text, rendering);
  const Segmentation words = segment(parsed.stripped, LengthUnit::kWord);
  std::vector<StreamItem> items;
  std::size_t t = 0;
  for (const Span& w : words.spans) {
    for (; t < parsed.tokens.size() && parsed.tokens[t].stripped_offset <= w.begin; ++t) {
      if (parsed.tokens[t].token.unit == LengthUnit::kWord) {
        items.push_back({true, {}, parsed.tokens[t].token});
      }
    }
    items.push_back({false, parsed.stripped.substr(w.begin, w.end - w.begin), {}});
  }
  for (; t < parsed.tokens.size(); ++t) {
    if (parsed.tokens[t].token.unit == LengthUnit::kWord) {
      items.push_back({true, {}, parsed.tokens[t].token});
    }
  }
  return items;
}

Clock clock_after(const SpecialToken& token, bool opening) {
  Clock c;
  if (opening && token.minor > 0) {
    c.phase = Clock::Phase::kOpen;
    c.minor = token.minor;
  } else if (token.major == 0 && token.minor == 0) {
    c.phase = Clock::Phase::kEnd;
  } else {
    c.phase = Clock::Phase::kPeriod;
  }
  return c;
}

}  // namespace

std::uint32_t NgramModel::intern(const std::string& word) {
  auto [it, inserted] = index_.try_emplace(word, static_cast<std::uint32_t>(symbols_.size()));
  if (inserted) symbols_.push_back(word);
  return it->second;
}

std::uint32_t NgramModel::lookup(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnk : it->second;
}

NgramModel NgramModel::train(std::span<const AugmentedExample> corpus,
                             const NgramOptions& options,
                             const TokenRendering& rendering) {
  if (options.order < 1) throw Error(ErrorKind::kConfig, "n-gram order must be at least 1");
  if (!(options.alpha > 0.0)) throw Error(ErrorKind::kConfig, "smoothing alpha must be positive");
  if (options.clock_cap < 1) throw Error(ErrorKind::kConfig, "clock cap must be at least 1");
  if (corpus.empty()) throw Error(ErrorKind::kNoData, "training corpus is empty");

  NgramModel model;
  model.options_ = options;
  model.rendering_ = rendering;
  for (std::string_view s : {std::string_view("</s>"), std::string_view("<unk>"),
                             std::string_view("<s>"), std::string_view("<open>"),
                             kKeepSymbol, kDecSymbol}) {
    model.intern(std::string(s));
  }

  const auto n_hist = static_cast<std::size_t>(options.order - 1);
  const auto cap = static_cast<std::uint32_t>(options.clock_cap);
  std::unordered_map<std::vector<std::uint32_t>, std::map<std::uint32_t, std::uint32_t>, KeyHash>
      events, words;

  const auto observe = [&](const std::vector<std::uint32_t>& history, const Clock& clock,
                           std::uint32_t symbol) {
    const std::uint32_t encoded = clock.encode(cap);
    const Event event = symbol == kEos    ? kEventEnd
                        : symbol == kKeep ? kEventKeep
                        : symbol == kDec  ? kEventDec
                                          : kEventWord;
    ++events[{encoded}][event];
    ++events[{encoded, history.back()}][event];
    if (event != kEventWord) return;
    for (std::size_t k = 0; k <= n_hist; ++k) {
      std::vector<std::uint32_t> key(history.end() - static_cast<std::ptrdiff_t>(k),
                                     history.end());
      ++words[key][symbol];
    }
  };

  for (const AugmentedExample& rec : corpus) {
    std::vector<std::uint32_t> history(std::max<std::size_t>(n_hist, 1), kBos);
    for (const Span& s : segment(rec.prompt, LengthUnit::kWord).spans) {
      history.push_back(model.intern(rec.prompt.substr(s.begin, s.end - s.begin)));
    }
    Clock clock;
    std::optional<std::uint32_t> last_major;
    for (const StreamItem& item : stream_items(rec.output, rendering)) {
      if (!item.special) {
        const std::uint32_t id = model.intern(item.word);
        observe(history, clock, id);
        history.push_back(id);
        ++clock.count;
        continue;
      }
      if (!last_major) {
        history.push_back(kOpen);
        clock = clock_after(item.token, true);
      } else {
        std::uint32_t symbol = kUnk;
        if (item.token.major == *last_major) symbol = kKeep;
        if (item.token.major + 1 == *last_major) symbol = kDec;
        if (symbol != kUnk) observe(history, clock, symbol);
        history.push_back(symbol);
        clock = clock_after(item.token, false);
      }
      last_major = item.token.major;
    }
    observe(history, clock, kEos);
  }

  const auto freeze = [](auto& raw, Table& table) {
    for (auto& [key, counts] : raw) {
      Counts c;
      for (const auto& [symbol, n] : counts) {
        c.entries.emplace_back(symbol, n);
        c.total += n;
      }
      table.emplace(key, std::move(c));
    }
  };
  freeze(events, model.events_);
  freeze(words, model.words_);
  return model;
}

const NgramModel::Counts* NgramModel::event_context(std::uint32_t last,
                                                    const Clock& clock) const {
  const std::uint32_t encoded = clock.encode(static_cast<std::uint32_t>(options_.clock_cap));
  for (const std::vector<std::uint32_t>& key :
       {std::vector<std::uint32_t>{encoded, last}, std::vector<std::uint32_t>{encoded}}) {
    auto it = events_.find(key);
    if (it != events_.end() && it->second.total > 0) return &it->second;
  }
  return nullptr;
}

const NgramModel::Counts* NgramModel::word_context(std::span<const std::uint32_t> history) const {
  const auto n_hist = static_cast<std::size_t>(options_.order - 1);
  for (std::size_t k = std::min(n_hist, history.size()) + 1; k-- > 0;) {
    std::vector<std::uint32_t> key(history.end() - static_cast<std::ptrdiff_t>(k),
                                   history.end());
    auto it = words_.find(key);
    if (it != words_.end() && it->second.total > 0) return &it->second;
  }
  return nullptr;
}

std::array<double, NgramModel::kEventCount> NgramModel::event_probabilities(
    const Counts* counts) const {
  std::array<double, kEventCount> p{};
  const double a = options_.alpha;
  const double total = counts ? static_cast<double>(counts->total) : 0.0;
  for (std::size_t e = 0; e < kEventCount; ++e) p[e] = a;
  if (counts) {
    for (const auto& [event, n] : counts->entries) p[event] += n;
  }
  for (double& v : p) v /= total + a * static_cast<double>(kEventCount);
  return p;
}

double NgramModel::word_probability(const Counts* counts, std::uint32_t word) const {
  const double v = static_cast<double>(symbols_.size() - kFirstWord);
  if (!counts) return 1.0 / v;
  double c = 0.0;
  auto it = std::lower_bound(counts->entries.begin(), counts->entries.end(),
                             std::make_pair(word, std::uint32_t{0}));
  if (it != counts->entries.end() && it->first == word) c = it->second;
  return (c + options_.alpha) / (static_cast<double>(counts->total) + options_.alpha * v);
}

std::unordered_map<std::string, double> NgramModel::distribution(
    std::span<const std::string> history, const Clock& clock) const {
  std::vector<std::uint32_t> ids(std::max(options_.order - 1, 1), kBos);
  for (const std::string& h : history) ids.push_back(lookup(h));
  const auto events = event_probabilities(event_context(ids.back(), clock));
  const Counts* words = word_context(ids);
  std::unordered_map<std::string, double> out;
  out[symbols_[kEos]] = events[kEventEnd];
  out[symbols_[kKeep]] = events[kEventKeep];
  out[symbols_[kDec]] = events[kEventDec];
  for (auto w = kFirstWord; w < symbols_.size(); ++w) {
    out[symbols_[w]] = events[kEventWord] * word_probability(words, w);
  }
  return out;
}

GenerationResult NgramModel::generate(std::string_view context, const HanselConfig& config,
                                      const GenerateOptions& options) const {
  const auto opening = trailing_word_token(context, config.rendering);
  const bool assisted = options.mode == GenerationMode::kProtocolAssisted;
  if (assisted && !opening) {
    throw Error(ErrorKind::kProtocol, "protocol-assisted generation needs an opening token");
  }
  if (symbols_.size() <= kFirstWord) {
    throw Error(ErrorKind::kNoData, "model has an empty vocabulary");
  }

  std::vector<std::uint32_t> history(std::max(options_.order - 1, 1), kBos);
  {
    const std::string_view prompt = opening ? context.substr(0, opening->offset) : context;
    const std::string stripped = strip_tokens(prompt, config.rendering);
    for (const Span& s : segment(stripped, LengthUnit::kWord).spans) {
      history.push_back(lookup(std::string_view(stripped).substr(s.begin, s.end - s.begin)));
    }
  }
  Clock clock;
  std::optional<std::uint32_t> last_major;
  std::vector<ScheduledToken> schedule;
  if (opening) {
    history.push_back(kOpen);
    clock = clock_after(opening->token, true);
    last_major = opening->token.major;
    if (assisted) {
      const int stride = word_stride(config);
      try {
        schedule = placement_schedule(LengthUnit::kWord, remaining(opening->token, stride), stride);
      } catch (const Error& e) {
        throw Error(ErrorKind::kProtocol, e.what());
      }
    }
  }

  auto rng = seeded_engine(options.seed, RngStream::kNgram);
  std::uniform_real_distribution<double> unit_interval(0.0, 1.0);
  const auto n_words = static_cast<std::uint32_t>(symbols_.size() - kFirstWord);

  std::vector<std::string> words;
  std::multimap<std::size_t, std::string> tokens;
  std::size_t next_scheduled = 1;
  bool terminated = assisted && schedule.size() == 1;  // the opening was |0>
  int residual_words = 0;
  GenerationResult result;

  const auto push_token = [&](const SpecialToken& t) {
    tokens.emplace(words.size(), render(t, config.rendering));
    clock = clock_after(t, false);
    last_major = t.major;
  };

  while (true) {
    if (assisted) {
      if (next_scheduled < schedule.size() &&
          schedule[next_scheduled].index == static_cast<std::int64_t>(words.size())) {
        const SpecialToken t = schedule[next_scheduled].token;
        history.push_back(t.major == *last_major ? kKeep : kDec);
        push_token(t);
        terminated = ++next_scheduled == schedule.size();
        continue;
      }
      if (terminated && residual_words >= config.residual_max) break;
    }
    if (words.size() >= static_cast<std::size_t>(options.max_len)) {
      result.hit_cap = true;
      break;
    }

    auto events = event_probabilities(event_context(history.back(), clock));
    if (assisted) {
      events[kEventKeep] = events[kEventDec] = 0.0;
      if (!terminated) events[kEventEnd] = 0.0;
    }
    double u = unit_interval(rng) * (events[0] + events[1] + events[2] + events[3]);
    std::size_t event = kEventWord;
    for (std::size_t e = 0; e < kEventCount; ++e) {
      if (events[e] > 0.0 && u < events[e]) {
        event = e;
        break;
      }
      u -= events[e];
    }

    if (event == kEventEnd) break;
    if (event == kEventKeep || event == kEventDec) {
      // A marker with no predecessor, or one below zero, ends the sequence.
      if (!last_major || (event == kEventDec && *last_major == 0)) break;
      const std::uint32_t major = event == kEventKeep ? *last_major : *last_major - 1;
      history.push_back(event == kEventKeep ? kKeep : kDec);
      push_token(SpecialToken{LengthUnit::kWord, major, 0});
      continue;
    }

    const Counts* counts = word_context(history);
    std::uint32_t word = kFirstWord;
    const double mass = counts ? static_cast<double>(counts->total) : 0.0;
    double w = unit_interval(rng) * (mass + options_.alpha * n_words);
    if (w < mass) {
      for (const auto& [symbol, n] : counts->entries) {
        if (w < n) {
          word = symbol;
          break;
        }
        w -= n;
      }
    } else {
      const auto pick = static_cast<std::uint32_t>((w - mass) / options_.alpha);
      word = kFirstWord + std::min(pick, n_words - 1);
    }
    words.push_back(symbols_[word]);
    history.push_back(word);
    ++clock.count;
    if (terminated) ++residual_words;
  }
  result.text = render_stream(words, tokens);
  return result;
}

nlohmann::json NgramModel::to_json() const {
  const auto dump_table = [](const Table& table) {
    std::vector<const std::vector<std::uint32_t>*> keys;
    keys.reserve(table.size());
    for (const auto& [key, counts] : table) keys.push_back(&key);
    std::sort(keys.begin(), keys.end(), [](const auto* a, const auto* b) { return *a < *b; });
    nlohmann::json rows = nlohmann::json::array();
    for (const auto* key : keys) {
      nlohmann::json entries = nlohmann::json::array();
      for (const auto& [symbol, n] : table.at(*key).entries) entries.push_back({symbol, n});
      rows.push_back({*key, entries});
    }
    return rows;
  };
  return {{"format", "lenctl-ngram"},
          {"version", 2},
          {"order", options_.order},
          {"alpha", options_.alpha},
          {"clock_cap", options_.clock_cap},
          {"rendering",
           {{"full", rendering_.full_template}, {"compact", rendering_.compact_template}}},
          {"symbols", symbols_},
          {"events", dump_table(events_)},
          {"words", dump_table(words_)}};
}

NgramModel NgramModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "lenctl-ngram" || j.at("version") != 2) {
      throw Error(ErrorKind::kParse, "unsupported n-gram model format");
    }
    NgramModel model;
    model.options_.order = j.at("order").get<int>();
    model.options_.alpha = j.at("alpha").get<double>();
    model.options_.clock_cap = j.at("clock_cap").get<int>();
    if (model.options_.order < 1 || !(model.options_.alpha > 0.0) ||
        model.options_.clock_cap < 1) {
      throw Error(ErrorKind::kParse, "n-gram model has invalid options");
    }
    model.rendering_.full_template = j.at("rendering").at("full").get<std::string>();
    model.rendering_.compact_template = j.at("rendering").at("compact").get<std::string>();
    for (const auto& s : j.at("symbols")) model.intern(s.get<std::string>());
    const auto n_symbols = static_cast<std::uint32_t>(model.symbols_.size());
    const auto load_table = [&](const nlohmann::json& rows, Table& table, std::uint32_t limit) {
      for (const auto& row : rows) {
        Counts c;
        for (const auto& e : row.at(1)) {
          const auto symbol = e.at(0).get<std::uint32_t>();
          if (symbol >= limit) throw Error(ErrorKind::kParse, "n-gram symbol out of range");
          c.entries.emplace_back(symbol, e.at(1).get<std::uint32_t>());
          c.total += c.entries.back().second;
        }
        std::sort(c.entries.begin(), c.entries.end());
        table.emplace(row.at(0).get<std::vector<std::uint32_t>>(), std::move(c));
      }
    };
    load_table(j.at("events"), model.events_, kEventCount);
    load_table(j.at("words"), model.words_, n_symbols);
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("bad n-gram model: ") + e.what());
  }
}

// --- synthetic corpus -------------------------------------------------------

namespace {

// Slots: N noun, A adjective, V past-tense verb, P place, T time, R role.
constexpr std::array<std::string_view, 26> kTemplates = {
    "{R} {V} {T}.",
    "The {N} {V}.",
    "It was {A}.",
    "The {A} {N} {V}.",
    "{R} {V} the {N}.",
    "Many {R} {V} in {P}.",
    "The {N} {V} near {P}.",
    "A {A} {N} {V} on {T}.",
    "{R} in {P} {V} the {A} {N}.",
    "Officials said the {N} {V} on {T}.",
    "The {A} {N} from {P} {V} {T} again.",
    "Several {R} {V} that the {N} was {A}.",
    "After the {N} {V}, {R} in {P} stayed {A}.",
    "The report says a {A} {N} {V} near {P} {T}.",
    "{R} {V} the {N} because the {A} {N} had {V} {T}.",
    "When the {N} {V} in {P}, local {R} {V} a {A} {N}.",
    "The {A} {N} {V} {T}, and {R} from {P} {V} the {N} too.",
    "Some {R} {V} that a {A} {N} in {P} {V} the old {N} {T}.",
    "It {V} {T}.",
    "{R} {V} a {A} {N}.",
    "The {N} in {P} was {A} {T}.",
    "Nobody {V} the {A} {N} until {R} {V} it.",
    "In {P}, {R} {V} the {N} and {V} the {A} {N}.",
    "The {N} {V} quickly.",
    "Later {T}, the {A} {N} {V} beside the {N} in {P}.",
    "{R} from {P} {V} that the {N} {V} a {A} {N} {T}.",
};

const std::map<char, std::vector<std::string_view>>& slot_values() {
  static const std::map<char, std::vector<std::string_view>> kSlots = {
      {'N', {"bridge", "council", "museum", "storm", "market", "school", "river",
             "budget", "train", "festival", "harbor", "library", "factory", "garden",
             "election", "hospital", "stadium", "forest", "airport", "company"}},
      {'A', {"new", "old", "large", "small", "quiet", "busy", "famous", "local",
             "modern", "damaged", "popular", "historic", "expensive", "crowded", "green"}},
      {'V', {"opened", "closed", "grew", "moved", "changed", "reported", "announced",
             "collapsed", "improved", "expanded", "failed", "returned", "survived",
             "delayed", "visited", "approved", "rejected", "launched", "flooded", "won"}},
      {'P', {"Boston", "Paris", "Texas", "Leeds", "Ohio", "Lagos", "Madrid", "Oslo",
             "Denver", "Cardiff", "Kyoto", "Lima"}},
      {'T', {"yesterday", "today", "Monday", "Friday", "overnight", "recently",
             "tonight", "later"}},
      {'R', {"Residents", "Officials", "Engineers", "Teachers", "Doctors", "Police",
             "Farmers", "Students", "Experts", "Workers", "Volunteers", "Reporters"}},
  };
  return kSlots;
}

std::size_t template_length(std::string_view tmpl) {
  return count_units(tmpl, LengthUnit::kWord);
}

template <typename Rng>
std::string fill_template(std::string_view tmpl, Rng& rng) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '{' && i + 2 < tmpl.size() && tmpl[i + 2] == '}') {
      const auto& values = slot_values().at(tmpl[i + 1]);
      std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
      std::string value(values[pick(rng)]);
      if (i == 0) value[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(value[0])));
      out += value;
      i += 2;
    } else {
      out.push_back(tmpl[i]);
    }
  }
  return out;
}

}  // namespace

std::size_t synthetic_template_count() { return kTemplates.size(); }

std::string synthetic_reference(int length, std::uint64_t seed, std::uint64_t salt) {
  auto rng = seeded_engine(seed, RngStream::kSynthetic, salt);
  std::string out;
  int left = length;
  const auto append = [&](const std::string& sentence) {
    if (!out.empty()) out += ' ';
    out += sentence;
  };
  if (left == 1) return "Yes.";
  if (left == 2) return "Thanks, friend.";
  while (left > 0) {
    std::vector<std::string_view> fitting;
    for (std::string_view t : kTemplates) {
      const auto n = static_cast<int>(template_length(t));
      if (n == left || (n < left && left - n >= 3)) fitting.push_back(t);
    }
    std::uniform_int_distribution<std::size_t> pick(0, fitting.size() - 1);
    const std::string_view chosen = fitting[pick(rng)];
    append(fill_template(chosen, rng));
    left -= static_cast<int>(template_length(chosen));
  }
  return out;
}

std::vector<Example> synthetic_corpus(const SyntheticCorpusOptions& options) {
  auto rng = seeded_engine(options.seed, RngStream::kSynthetic, 0xC0FFEE);
  std::bernoulli_distribution typical(options.typical_share);
  std::uniform_int_distribution<int> typical_len(options.typical_min, options.typical_max);
  std::uniform_int_distribution<int> wide_len(options.min_length, options.max_length);
  std::uniform_int_distribution<int> source_len(40, 120);
  std::vector<Example> corpus;
  corpus.reserve(options.size);
  for (std::size_t i = 0; i < options.size; ++i) {
    const int length = typical(rng) ? typical_len(rng) : wide_len(rng);
    const int src = source_len(rng);
    Example ex;
    ex.id = options.id_prefix + "-" + std::to_string(i);
    ex.task = options.task;
    ex.reference = synthetic_reference(length, options.seed, 2 * i + 1);
    ex.source = synthetic_reference(src, options.seed, 2 * i + 2);
    corpus.push_back(std::move(ex));
  }
  return corpus;
}

}  // namespace lenctl
