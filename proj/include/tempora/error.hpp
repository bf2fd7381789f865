// Copyright 2026 The Tempora Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tempora {

enum class Errc {
  kInvalidArgument,
  kDurationTooLong,
  kInvalidStride,
  kEmptyTokenization,
  kUnknownTokenId,
  kTokenizerGap,
  kCorruptFile,
  kClipMismatch,
  kLengthMismatch,
  kNonFinite,
  kDiverged,
  kConfig,
  kIo,
};

std::string_view to_string(Errc code);

// Library-wide exception. The code lets callers (and the CLI) branch on the
// failure class without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tempora
