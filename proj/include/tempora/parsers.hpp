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

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tempora/types.hpp"

namespace tempora {

struct ParsedOutput {
  TaskKind task = TaskKind::AudioGrounding;
  std::vector<Event> events;
  std::vector<std::string> warnings;
};

enum class ParseErrorKind { BadSyntax, BadTimestamp, EmptyOutput, SwappedBounds };

std::string_view to_string(ParseErrorKind kind);

struct ParseError {
  ParseErrorKind kind = ParseErrorKind::BadSyntax;
  std::size_t position = 0;  // byte offset into the input, <= input size
  std::size_t line = 1;      // 1-based line of position
  std::string detail;

  std::string message() const;
};

/// Either a ParsedOutput or the first ParseError encountered.
class ParseResult {
 public:
  ParseResult(ParsedOutput value) : v_(std::move(value)) {}  // NOLINT
  ParseResult(ParseError error) : v_(std::move(error)) {}    // NOLINT

  bool ok() const noexcept { return std::holds_alternative<ParsedOutput>(v_); }
  explicit operator bool() const noexcept { return ok(); }

  const ParsedOutput& value() const { return std::get<ParsedOutput>(v_); }
  ParsedOutput& value() { return std::get<ParsedOutput>(v_); }
  const ParseError& error() const { return std::get<ParseError>(v_); }

 private:
  std::variant<ParsedOutput, ParseError> v_;
};

struct ParseOptions {
  /// Repair onset > offset by swapping (with a warning) instead of failing.
  bool lenient = false;
};

// Parsers never throw on malformed input; every failure is a ParseError.

/// {"query": [onset, offset], ...}
ParseResult parse_ag(std::string_view text, const ParseOptions& opts = {});

/// {"Dog": [0.4, 1.2], "Speech": [[3.0, 8.5], [9.0, 9.5]]}; repeated keys and
/// array-of-intervals values both allowed.
ParseResult parse_sed(std::string_view text, const ParseOptions& opts = {});

/// One "onset-offset, description" per non-blank line; 1-3 decimals.
ParseResult parse_dac(std::string_view text, const ParseOptions& opts = {});

ParseResult parse_output(TaskKind task, std::string_view text, const ParseOptions& opts = {});

// Serializers emit text the matching parser accepts. JSON numbers use the
// shortest round-trip representation; DAC times use 2-3 decimals. Throws
// Error(kInvalidArgument) for events the grammar cannot express (e.g. a DAC
// caption containing a newline).
std::string serialize_ag(const std::vector<Event>& events);
std::string serialize_sed(const std::vector<Event>& events);
std::string serialize_dac(const std::vector<Event>& events);
std::string serialize_output(TaskKind task, const std::vector<Event>& events);

/// Event order the serializer + parser round trip produces: SED groups events
/// of the same label at the label's first appearance; other tasks keep order.
std::vector<Event> canonical_order(TaskKind task, const std::vector<Event>& events);

/// DAC time rendering: three decimals with a trailing zero dropped, so
/// 2.52 -> "2.52", 2.525 -> "2.525", 3 -> "3.00".
std::string format_dac_time(double seconds);

}  // namespace tempora
