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

#ifndef LENCTL_ERROR_HPP_
#define LENCTL_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lenctl {

enum class ErrorKind {
  kBoundary,
  kMalformedToken,
  kParse,
  kEmptyReference,
  kConfig,
  kNoData,
  kProtocol,
  kIo,
  kJudgeUnavailable,
  kScoringParse,
  kUsage,
};

std::string_view error_kind_name(ErrorKind kind);

// Single exception type for the library. `offset` is a byte offset into the
// text being processed (parse errors) or a 1-based line number (file readers);
// which one is stated in the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message), kind_(kind), offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> offset_;
};

}  // namespace lenctl

#endif  // LENCTL_ERROR_HPP_
