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

// LLM-judge quality scoring against a chat-completions endpoint. One request
// per category; answers must be a bare integer inside the category scale.

#ifndef LENCTL_JUDGE_HPP_
#define LENCTL_JUDGE_HPP_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lenctl/error.hpp"
#include "lenctl/text.hpp"

namespace lenctl {

struct JudgeConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4";
  std::string api_key_env = "LENCTL_JUDGE_API_KEY";
  double timeout_seconds = 60.0;
  int max_retries = 3;
  int retry_backoff_ms = 500;  // doubled after every failed attempt
  std::filesystem::path cache_dir;  // empty: no cache
  double temperature = 0.0;
  int max_in_flight = 4;

  void check() const;
};

struct JudgeCategory {
  std::string_view name;
  int min;
  int max;
  std::string_view criteria;
  std::string_view steps;
};

std::span<const JudgeCategory> judge_categories(Task task);

struct QualityScore {
  Task task = Task::kSummarization;
  std::vector<std::pair<std::string, int>> categories;  // in judge_categories order
  double average = 0.0;  // arithmetic mean of the raw category scores
};

nlohmann::json to_json(const QualityScore& score);

// Thrown for answers that are not a lone in-scale integer.
class ScoringParseError : public Error {
 public:
  ScoringParseError(const std::string& message, std::string raw)
      : Error(ErrorKind::kScoringParse, message), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

std::string judge_prompt(const JudgeCategory& category, Task task,
                         std::string_view source, std::string_view generated);

// Accepts "4", "4.", "Coherence: 4" or "- Coherence: 4" (surrounding
// whitespace ignored); anything else, or a value outside [min, max], throws.
int parse_judge_answer(std::string_view raw, const JudgeCategory& category);

// Sends one chat request and returns the assistant message content. Throws
// Error(kJudgeUnavailable) for failures worth retrying and
// Error(kScoringParse) for a response body that is not a chat completion.
class JudgeTransport {
 public:
  virtual ~JudgeTransport() = default;
  virtual std::string complete(const JudgeConfig& config,
                               const nlohmann::json& request) = 0;
};

std::unique_ptr<JudgeTransport> make_http_transport();

struct JudgeItem {
  std::string source;
  std::string generated;
  Task task = Task::kSummarization;
};

struct JudgeOutcome {
  std::optional<QualityScore> score;
  std::optional<ErrorKind> error;
  std::string message;
  std::string raw;  // judge answer that failed to parse
};

class Judge {
 public:
  explicit Judge(JudgeConfig config, std::shared_ptr<JudgeTransport> transport = nullptr);

  QualityScore score(std::string_view source, std::string_view generated, Task task);

  // Scores every item with at most config.max_in_flight requests in flight.
  // Outcomes come back in input order; failures do not stop the batch.
  std::vector<JudgeOutcome> score_batch(std::span<const JudgeItem> items);

  // Requests that reached the transport (cache hits excluded).
  std::size_t network_calls() const { return network_calls_.load(); }

 private:
  int score_category(const JudgeCategory& category, Task task,
                     std::string_view source, std::string_view generated);
  std::string ask(const std::string& prompt);
  std::optional<std::string> cache_get(const std::string& key) const;
  void cache_put(const std::string& key, const std::string& content) const;

  JudgeConfig config_;
  std::shared_ptr<JudgeTransport> transport_;
  std::atomic<std::size_t> network_calls_{0};
};

}  // namespace lenctl

#endif  // LENCTL_JUDGE_HPP_
