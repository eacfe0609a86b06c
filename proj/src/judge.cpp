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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "lenctl/judge.hpp"

#include <array>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "lenctl/hash.hpp"

namespace lenctl {

namespace {

constexpr std::array<JudgeCategory, 4> kSummarizationCategories = {{
    {"coherence", 1, 5,
     "Coherence (1-5): how well the sentences of the summary hang together. A "
     "good summary is organized, moves from one sentence to the next without "
     "jumps, and reads as one connected account of the topic rather than a list "
     "of unrelated facts.",
     "1. Read the source and note its topic and main points.\n"
     "2. Read the summary and check whether it covers them in a clear, logical order.\n"
     "3. Give a coherence score from 1 to 5."},
    {"consistency", 1, 5,
     "Consistency (1-5): factual agreement between the summary and the source. "
     "Every statement in the summary must be supported by the source. Penalize "
     "invented facts and claims the source contradicts.",
     "1. Read the source and note the facts it states.\n"
     "2. Read the summary and compare each claim against the source.\n"
     "3. Give a consistency score from 1 to 5."},
    {"fluency", 1, 3,
     "Fluency (1-3): the language quality of individual sentences: grammar, "
     "spelling, punctuation, word choice and sentence structure.\n"
     "1 = many errors that make the text hard to read.\n"
     "2 = some errors that affect clarity or smoothness, but the main points are "
     "readable.\n"
     "3 = few or no errors; easy to read.",
     "1. Read the summary sentence by sentence.\n"
     "2. Note grammar, spelling and wording problems.\n"
     "3. Give a fluency score from 1 to 3."},
    {"relevance", 1, 5,
     "Relevance (1-5): whether the summary keeps the important content of the "
     "source and leaves out the rest. Penalize redundant or peripheral "
     "material.",
     "1. Read the source and identify its most important information.\n"
     "2. Read the summary and check how much of that it keeps and how much "
     "filler it adds.\n"
     "3. Give a relevance score from 1 to 5."},
}};

constexpr std::array<JudgeCategory, 4> kDialogueCategories = {{
    {"naturalness", 1, 5,
     "Naturalness (1-5): whether the response sounds like something a person "
     "would say in this conversation.",
     "1. Read the conversation history.\n"
     "2. Read the response and judge whether a person could plausibly have said it.\n"
     "3. Give a naturalness score from 1 to 5."},
    {"coherence", 1, 5,
     "Coherence (1-5): whether the response follows on from the conversation "
     "and makes sense as the next turn.",
     "1. Read the conversation history and note what was last said.\n"
     "2. Read the response and check that it continues the conversation sensibly.\n"
     "3. Give a coherence score from 1 to 5."},
    {"engagingness", 1, 3,
     "Engagingness (1-3): whether the response is interesting and invites the "
     "conversation to continue.\n"
     "1 = dull or generic.\n"
     "2 = somewhat interesting.\n"
     "3 = interesting and engaging.",
     "1. Read the conversation history.\n"
     "2. Read the response and judge how interesting it is.\n"
     "3. Give an engagingness score from 1 to 3."},
    {"groundedness", 1, 5,
     "Groundedness (1-5): whether the response relies on information that is "
     "present in the conversation rather than made-up details.",
     "1. Read the conversation history and note the facts it contains.\n"
     "2. Read the response and check which of its details come from the history.\n"
     "3. Give a groundedness score from 1 to 5."},
}};

std::string capitalized(std::string_view s) {
  std::string out(s);
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

class HttpTransport : public JudgeTransport {
 public:
  std::string complete(const JudgeConfig& config, const nlohmann::json& request) override {
    const std::string& url = config.endpoint;
    const std::size_t scheme_end = url.find("://");
    const std::size_t path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string base = url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    const auto timeout = std::chrono::duration<double>(config.timeout_seconds);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
    client.set_connection_timeout(micros);
    client.set_read_timeout(micros);
    client.set_write_timeout(micros);

    httplib::Headers headers;
    if (const char* key = std::getenv(config.api_key_env.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    auto res = client.Post(path, headers, request.dump(), "application/json");
    if (!res) {
      throw Error(ErrorKind::kJudgeUnavailable,
                  "request to " + url + " failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      throw Error(ErrorKind::kJudgeUnavailable,
                  "judge endpoint returned HTTP " + std::to_string(res->status));
    }
    try {
      const auto body = nlohmann::json::parse(res->body);
      return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw ScoringParseError("response is not a chat completion", res->body);
    }
  }
};

}  // namespace

void JudgeConfig::check() const {
  if (!endpoint.starts_with("http://") && !endpoint.starts_with("https://")) {
    throw Error(ErrorKind::kConfig, "judge endpoint must be an http(s) URL: " + endpoint);
  }
  if (model.empty()) throw Error(ErrorKind::kConfig, "judge model name is empty");
  if (!(timeout_seconds > 0.0)) throw Error(ErrorKind::kConfig, "judge timeout must be positive");
  if (max_retries < 0) throw Error(ErrorKind::kConfig, "judge max_retries must be >= 0");
  if (retry_backoff_ms < 0) throw Error(ErrorKind::kConfig, "judge retry backoff must be >= 0");
  if (max_in_flight < 1) throw Error(ErrorKind::kConfig, "judge max_in_flight must be >= 1");
  if (temperature < 0.0 || temperature > 2.0) {
    throw Error(ErrorKind::kConfig, "judge temperature must be in [0, 2]");
  }
}

std::span<const JudgeCategory> judge_categories(Task task) {
  if (task == Task::kDialogue) return kDialogueCategories;
  return kSummarizationCategories;
}

nlohmann::json to_json(const QualityScore& score) {
  nlohmann::json categories = nlohmann::json::object();
  for (const auto& [name, value] : score.categories) categories[name] = value;
  return {{"task", task_name(score.task)}, {"categories", categories}, {"average", score.average}};
}

std::string judge_prompt(const JudgeCategory& category, Task task,
                         std::string_view source, std::string_view generated) {
  const bool dialogue = task == Task::kDialogue;
  const std::string_view doc = dialogue ? "conversation history" : "news article";
  const std::string_view out = dialogue ? "response" : "summary";
  std::ostringstream p;
  p << "You will be given one " << doc << " and a " << out << " written for it.\n"
    << "Your task is to rate the " << out << " on one metric.\n"
    << "Keep these instructions at hand while you read.\n\n"
    << "Evaluation Criteria:\n\n" << category.criteria << "\n\n"
    << "Evaluation Steps:\n\n" << category.steps << "\n\n"
    << (dialogue ? "Conversation History" : "Source Text") << ":\n\n" << source << "\n\n"
    << (dialogue ? "Response" : "Summary") << ":\n\n" << generated << "\n\n"
    << "Evaluation Form (scores ONLY):\n\n"
    << "- " << capitalized(category.name) << ":";
  return p.str();
}

int parse_judge_answer(std::string_view raw, const JudgeCategory& category) {
  std::string_view s = trim(raw);
  if (s.starts_with("- ")) s.remove_prefix(2);
  if (const std::size_t colon = s.find(':'); colon != std::string_view::npos) {
    if (!iequals(trim(s.substr(0, colon)), category.name)) {
      throw ScoringParseError("unexpected label in judge answer", std::string(raw));
    }
    s = trim(s.substr(colon + 1));
  }
  if (s.ends_with('.')) s.remove_suffix(1);
  if (s.empty() || s.size() > 3 ||
      !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ScoringParseError("judge answer is not an integer", std::string(raw));
  }
  const int value = std::stoi(std::string(s));
  if (value < category.min || value > category.max) {
    throw ScoringParseError("judge score " + std::to_string(value) + " outside " +
                                std::string(category.name) + " scale [" +
                                std::to_string(category.min) + ", " +
                                std::to_string(category.max) + "]",
                            std::string(raw));
  }
  return value;
}

std::unique_ptr<JudgeTransport> make_http_transport() { return std::make_unique<HttpTransport>(); }

Judge::Judge(JudgeConfig config, std::shared_ptr<JudgeTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  config_.check();
  if (!transport_) transport_ = make_http_transport();
}

std::optional<std::string> Judge::cache_get(const std::string& key) const {
  if (config_.cache_dir.empty()) return std::nullopt;
  std::ifstream in(config_.cache_dir / (key + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("model") != config_.model) return std::nullopt;
    return j.at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;  // unreadable entries are refetched and overwritten
  }
}

void Judge::cache_put(const std::string& key, const std::string& content) const {
  if (config_.cache_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(config_.cache_dir, ec);
  const auto final_path = config_.cache_dir / (key + ".json");
  std::ostringstream suffix;
  suffix << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const auto tmp_path = config_.cache_dir / (key + suffix.str());
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot write judge cache " + tmp_path.string());
    out << nlohmann::json{{"model", config_.model}, {"content", content}}.dump();
    if (!out.flush()) throw Error(ErrorKind::kIo, "cannot write judge cache " + tmp_path.string());
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) {
    std::filesystem::remove(tmp_path, ec);
    throw Error(ErrorKind::kIo, "cannot publish judge cache entry " + final_path.string());
  }
}

std::string Judge::ask(const std::string& prompt) {
  const std::string key = sha256_hex(config_.model + '\n' + prompt);
  if (auto hit = cache_get(key)) return *hit;

  const nlohmann::json request = {
      {"model", config_.model},
      {"temperature", config_.temperature},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  std::string last_error;
  int backoff = config_.retry_backoff_ms;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff));
      backoff *= 2;
    }
    try {
      ++network_calls_;
      std::string content = transport_->complete(config_, request);
      cache_put(key, content);
      return content;
    } catch (const ScoringParseError&) {
      throw;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kJudgeUnavailable) throw;
      last_error = e.what();
    }
  }
  throw Error(ErrorKind::kJudgeUnavailable,
              "judge unavailable after " + std::to_string(config_.max_retries + 1) +
                  " attempts: " + last_error);
}

int Judge::score_category(const JudgeCategory& category, Task task,
                          std::string_view source, std::string_view generated) {
  return parse_judge_answer(ask(judge_prompt(category, task, source, generated)), category);
}

QualityScore Judge::score(std::string_view source, std::string_view generated, Task task) {
  if (trim(source).empty() || trim(generated).empty()) {
    throw Error(ErrorKind::kUsage, "judge needs a non-empty source and generated text");
  }
  QualityScore out;
  out.task = task;
  double sum = 0.0;
  for (const JudgeCategory& c : judge_categories(task)) {
    const int v = score_category(c, task, source, generated);
    out.categories.emplace_back(std::string(c.name), v);
    sum += v;
  }
  out.average = sum / static_cast<double>(out.categories.size());
  return out;
}

std::vector<JudgeOutcome> Judge::score_batch(std::span<const JudgeItem> items) {
  struct Slot {
    std::size_t item;
    std::size_t category;
  };
  std::vector<Slot> slots;
  std::vector<JudgeOutcome> outcomes(items.size());
  std::vector<std::vector<int>> values(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (trim(items[i].source).empty() || trim(items[i].generated).empty()) {
      outcomes[i].error = ErrorKind::kUsage;
      outcomes[i].message = "judge needs a non-empty source and generated text";
      continue;
    }
    const std::size_t n = judge_categories(items[i].task).size();
    values[i].assign(n, 0);
    for (std::size_t c = 0; c < n; ++c) slots.push_back({i, c});
  }

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t s = next++; s < slots.size(); s = next++) {
      const auto [i, c] = slots[s];
      {
        std::lock_guard lock(mu);
        if (outcomes[i].error) continue;
      }
      const JudgeItem& item = items[i];
      const JudgeCategory& category = judge_categories(item.task)[c];
      try {
        values[i][c] = score_category(category, item.task, item.source, item.generated);
      } catch (const ScoringParseError& e) {
        std::lock_guard lock(mu);
        if (!outcomes[i].error) outcomes[i] = {std::nullopt, e.kind(), e.what(), e.raw()};
      } catch (const Error& e) {
        std::lock_guard lock(mu);
        if (!outcomes[i].error) outcomes[i] = {std::nullopt, e.kind(), e.what(), {}};
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        if (!outcomes[i].error) outcomes[i] = {std::nullopt, ErrorKind::kIo, e.what(), {}};
      }
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(config_.max_in_flight), slots.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < items.size(); ++i) {
    if (outcomes[i].error) continue;
    QualityScore score;
    score.task = items[i].task;
    double sum = 0.0;
    const auto categories = judge_categories(items[i].task);
    for (std::size_t c = 0; c < categories.size(); ++c) {
      score.categories.emplace_back(std::string(categories[c].name), values[i][c]);
      sum += values[i][c];
    }
    score.average = sum / static_cast<double>(categories.size());
    outcomes[i].score = std::move(score);
  }
  return outcomes;
}

}  // namespace lenctl
