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

#include "tempora/parsers.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <system_error>

#include "tempora/error.hpp"

namespace tempora {

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::BadSyntax: return "BadSyntax";
    case ParseErrorKind::BadTimestamp: return "BadTimestamp";
    case ParseErrorKind::EmptyOutput: return "EmptyOutput";
    case ParseErrorKind::SwappedBounds: return "SwappedBounds";
  }
  return "?";
}

std::string ParseError::message() const {
  return std::string(to_string(kind)) + " at line " + std::to_string(line) + ", offset " +
         std::to_string(position) + ": " + detail;
}

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t line_of(std::string_view text, std::size_t pos) {
  pos = std::min(pos, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

ParseError make_error(std::string_view text, ParseErrorKind kind, std::size_t pos,
                      std::string detail) {
  pos = std::min(pos, text.size());
  return ParseError{kind, pos, line_of(text, pos), std::move(detail)};
}

bool only_ws(std::string_view text) {
  return std::all_of(text.begin(), text.end(), is_ws);
}

void note_surrounding_ws(std::string_view text, std::vector<std::string>& warnings) {
  if (!text.empty() && (is_ws(text.front()) || is_ws(text.back()))) {
    warnings.emplace_back("leading or trailing whitespace ignored");
  }
}

// Validates an interval: finite, non-negative, onset <= offset (or repairs a
// swap in lenient mode).
std::optional<ParseError> check_bounds(std::string_view text, std::size_t pos, double& onset,
                                       double& offset, const ParseOptions& opts,
                                       std::vector<std::string>& warnings) {
  if (onset > offset) {
    if (!opts.lenient) {
      return make_error(text, ParseErrorKind::SwappedBounds, pos,
                        "onset " + std::to_string(onset) + " > offset " + std::to_string(offset));
    }
    std::swap(onset, offset);
    warnings.push_back("swapped bounds repaired at offset " + std::to_string(pos));
  }
  return std::nullopt;
}

// Recursive-descent reader for the JSON subset used by the AG/SED grammars:
// an object whose values are intervals [a, b] or (SED) lists of intervals.
// Keys may repeat; order is preserved.
class JsonEventReader {
 public:
  JsonEventReader(std::string_view text, TaskKind task, const ParseOptions& opts)
      : text_(text), task_(task), opts_(opts) {}

  ParseResult run() {
    ParsedOutput out;
    out.task = task_;
    if (only_ws(text_)) {
      return make_error(text_, ParseErrorKind::EmptyOutput, 0, "empty output");
    }
    note_surrounding_ws(text_, out.warnings);
    skip_ws();
    if (!consume('{')) return syntax("expected '{'");
    skip_ws();
    if (!consume('}')) {
      for (;;) {
        skip_ws();
        const std::size_t key_pos = pos_;
        std::string key;
        if (auto err = read_string(key)) return *err;
        if (normalize_label(key).empty()) {
          return make_error(text_, ParseErrorKind::BadSyntax, key_pos, "empty label");
        }
        skip_ws();
        if (!consume(':')) return syntax("expected ':'");
        skip_ws();
        if (auto err = read_value(key, out)) return *err;
        skip_ws();
        if (consume(',')) continue;
        if (consume('}')) break;
        return syntax("expected ',' or '}'");
      }
    }
    skip_ws();
    if (pos_ != text_.size()) return syntax("trailing characters after object");
    return out;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  bool consume(char c) {
    if (peek() == c && !at_end()) {
      ++pos_;
      return true;
    }
    return false;
  }
  void skip_ws() {
    while (!at_end() && is_ws(text_[pos_])) ++pos_;
  }
  ParseError syntax(std::string detail) const {
    return make_error(text_, ParseErrorKind::BadSyntax, pos_, std::move(detail));
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::optional<std::uint32_t> read_hex4() {
    if (text_.size() - pos_ < 4) return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + pos_ + 4, v, 16);
    if (ec != std::errc() || ptr != text_.data() + pos_ + 4) return std::nullopt;
    pos_ += 4;
    return v;
  }

  std::optional<ParseError> read_string(std::string& out) {
    if (!consume('"')) return syntax("expected string");
    for (;;) {
      if (at_end()) return syntax("unterminated string");
      const char c = text_[pos_];
      if (c == '"') {
        ++pos_;
        return std::nullopt;
      }
      if (static_cast<unsigned char>(c) < 0x20) return syntax("control character in string");
      if (c != '\\') {
        out.push_back(c);
        ++pos_;
        continue;
      }
      ++pos_;
      if (at_end()) return syntax("unterminated escape");
      const char e = text_[pos_++];
      switch (e) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case '/': out.push_back('/'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 't': out.push_back('\t'); break;
        case 'u': {
          auto hi = read_hex4();
          if (!hi) return syntax("bad \\u escape");
          std::uint32_t cp = *hi;
          if (cp >= 0xD800 && cp <= 0xDBFF) {
            if (!(consume('\\') && consume('u'))) return syntax("unpaired surrogate");
            auto lo = read_hex4();
            if (!lo || *lo < 0xDC00 || *lo > 0xDFFF) return syntax("unpaired surrogate");
            cp = 0x10000 + ((cp - 0xD800) << 10) + (*lo - 0xDC00);
          } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
            return syntax("unpaired surrogate");
          }
          append_utf8(out, cp);
          break;
        }
        default:
          --pos_;
          return syntax("unknown escape");
      }
    }
  }

  // A JSON-style number that must be a finite, non-negative timestamp.
  std::optional<ParseError> read_time(double& value) {
    const std::size_t start = pos_;
    const char c = peek();
    if (c == '"' || c == '{' || c == 't' || c == 'f' || c == 'n') {
      return make_error(text_, ParseErrorKind::BadTimestamp, start, "non-numeric timestamp");
    }
    std::size_t p = pos_;
    if (p < text_.size() && text_[p] == '-') ++p;
    const std::size_t int_start = p;
    while (p < text_.size() && is_digit(text_[p])) ++p;
    if (p == int_start) return syntax("expected number");
    if (p < text_.size() && text_[p] == '.') {
      ++p;
      const std::size_t frac_start = p;
      while (p < text_.size() && is_digit(text_[p])) ++p;
      if (p == frac_start) return make_error(text_, ParseErrorKind::BadTimestamp, start, "malformed number");
    }
    if (p < text_.size() && (text_[p] == 'e' || text_[p] == 'E')) {
      ++p;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      const std::size_t exp_start = p;
      while (p < text_.size() && is_digit(text_[p])) ++p;
      if (p == exp_start) return make_error(text_, ParseErrorKind::BadTimestamp, start, "malformed exponent");
    }
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + p, value);
    if (ec != std::errc() || ptr != text_.data() + p || !std::isfinite(value)) {
      return make_error(text_, ParseErrorKind::BadTimestamp, start, "timestamp out of range");
    }
    if (value < 0.0) {
      return make_error(text_, ParseErrorKind::BadTimestamp, start, "negative timestamp");
    }
    pos_ = p;
    return std::nullopt;
  }

  // '[' already consumed.
  std::optional<ParseError> read_interval_body(const std::string& key, ParsedOutput& out) {
    const std::size_t start = pos_ - 1;
    skip_ws();
    if (peek() == ']') return syntax("interval needs exactly two timestamps, got 0");
    double onset = 0.0, offset = 0.0;
    if (auto err = read_time(onset)) return err;
    skip_ws();
    if (peek() == ']') return syntax("interval needs exactly two timestamps, got 1");
    if (!consume(',')) return syntax("expected ','");
    skip_ws();
    if (auto err = read_time(offset)) return err;
    skip_ws();
    if (peek() == ',') return syntax("interval needs exactly two timestamps, got more");
    if (!consume(']')) return syntax("expected ']'");
    if (auto err = check_bounds(text_, start, onset, offset, opts_, out.warnings)) return err;
    out.events.push_back(Event{key, TimeInterval{onset, offset}});
    return std::nullopt;
  }

  std::optional<ParseError> read_value(const std::string& key, ParsedOutput& out) {
    if (!consume('[')) {
      const char c = peek();
      if (c == '"' || c == '{' || c == 't' || c == 'f' || c == 'n' || c == '-' || is_digit(c)) {
        return syntax("value must be an [onset, offset] array");
      }
      return syntax("expected '['");
    }
    skip_ws();
    if (peek() != '[') return read_interval_body(key, out);
    if (task_ != TaskKind::SoundEventDetection) {
      return syntax("nested interval lists are only accepted for sed");
    }
    for (;;) {
      skip_ws();
      if (!consume('[')) return syntax("expected '['");
      if (auto err = read_interval_body(key, out)) return err;
      skip_ws();
      if (consume(',')) continue;
      if (consume(']')) return std::nullopt;
      return syntax("expected ',' or ']'");
    }
  }

  std::string_view text_;
  TaskKind task_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse_ag(std::string_view text, const ParseOptions& opts) {
  return JsonEventReader(text, TaskKind::AudioGrounding, opts).run();
}

ParseResult parse_sed(std::string_view text, const ParseOptions& opts) {
  return JsonEventReader(text, TaskKind::SoundEventDetection, opts).run();
}

namespace {

// Reads <digits>.<1-3 digits> at pos.
std::optional<ParseError> read_dac_time(std::string_view text, std::size_t& pos, double& value) {
  const std::size_t start = pos;
  if (pos < text.size() && text[pos] == '-' && pos + 1 < text.size() && is_digit(text[pos + 1])) {
    return make_error(text, ParseErrorKind::BadTimestamp, start, "negative timestamp");
  }
  std::size_t p = pos;
  while (p < text.size() && is_digit(text[p])) ++p;
  if (p == start) return make_error(text, ParseErrorKind::BadSyntax, start, "expected timestamp");
  std::size_t frac = p;
  if (p < text.size() && text[p] == '.') {
    frac = ++p;
    while (p < text.size() && is_digit(text[p])) ++p;
  }
  if (p == frac || p - frac > 3) {
    return make_error(text, ParseErrorKind::BadTimestamp, start,
                      "timestamp must have 1-3 decimal places");
  }
  auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + p, value);
  if (ec != std::errc() || !std::isfinite(value)) {
    return make_error(text, ParseErrorKind::BadTimestamp, start, "timestamp out of range");
  }
  pos = p;
  return std::nullopt;
}

}  // namespace

ParseResult parse_dac(std::string_view text, const ParseOptions& opts) {
  ParsedOutput out;
  out.task = TaskKind::DenseAudioCaptioning;
  if (only_ws(text)) return make_error(text, ParseErrorKind::EmptyOutput, 0, "empty output");
  note_surrounding_ws(text, out.warnings);

  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    const std::string_view line = text.substr(line_start, line_end - line_start);
    if (!only_ws(line)) {
      // Work on the full text so error offsets are absolute.
      const std::string_view upto = text.substr(0, line_end);
      std::size_t p = line_start;
      auto skip = [&] {
        while (p < upto.size() && is_ws(upto[p])) ++p;
      };
      skip();
      double onset = 0.0, offset = 0.0;
      if (auto err = read_dac_time(upto, p, onset)) return *err;
      skip();
      if (p >= upto.size() || upto[p] != '-') {
        return make_error(text, ParseErrorKind::BadSyntax, p, "expected '-' between timestamps");
      }
      ++p;
      skip();
      if (auto err = read_dac_time(upto, p, offset)) return *err;
      skip();
      if (p >= upto.size() || upto[p] != ',') {
        return make_error(text, ParseErrorKind::BadSyntax, p, "expected ',' after timestamps");
      }
      ++p;
      skip();
      std::size_t desc_end = upto.size();
      while (desc_end > p && is_ws(upto[desc_end - 1])) --desc_end;
      if (desc_end == p) return make_error(text, ParseErrorKind::BadSyntax, p, "empty description");
      if (auto err = check_bounds(text, line_start, onset, offset, opts, out.warnings)) return *err;
      out.events.push_back(Event{std::string(upto.substr(p, desc_end - p)), TimeInterval{onset, offset}});
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  return out;
}

ParseResult parse_output(TaskKind task, std::string_view text, const ParseOptions& opts) {
  switch (task) {
    case TaskKind::AudioGrounding: return parse_ag(text, opts);
    case TaskKind::SoundEventDetection: return parse_sed(text, opts);
    case TaskKind::DenseAudioCaptioning: return parse_dac(text, opts);
  }
  return make_error(text, ParseErrorKind::BadSyntax, 0, "unknown task");
}

namespace {

std::string json_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc() || !std::isfinite(v)) {
    throw Error(Errc::kInvalidArgument, "timestamp not serializable");
  }
  return std::string(buf, end);
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

std::string json_interval(const TimeInterval& t) {
  return "[" + json_number(t.onset) + ", " + json_number(t.offset) + "]";
}

void require_valid(const Event& e) {
  if (!e.interval.valid()) throw Error(Errc::kInvalidArgument, "invalid interval for '" + e.label + "'");
  if (normalize_label(e.label).empty()) throw Error(Errc::kInvalidArgument, "empty label");
}

}  // namespace

std::string serialize_ag(const std::vector<Event>& events) {
  std::string out = "{";
  for (std::size_t i = 0; i < events.size(); ++i) {
    require_valid(events[i]);
    if (i) out += ", ";
    out += json_string(events[i].label) + ": " + json_interval(events[i].interval);
  }
  return out + "}";
}

std::vector<Event> canonical_order(TaskKind task, const std::vector<Event>& events) {
  if (task != TaskKind::SoundEventDetection) return events;
  std::vector<Event> out;
  out.reserve(events.size());
  std::vector<bool> taken(events.size(), false);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (taken[i]) continue;
    for (std::size_t j = i; j < events.size(); ++j) {
      if (!taken[j] && events[j].label == events[i].label) {
        out.push_back(events[j]);
        taken[j] = true;
      }
    }
  }
  return out;
}

std::string serialize_sed(const std::vector<Event>& events) {
  const std::vector<Event> grouped = canonical_order(TaskKind::SoundEventDetection, events);
  std::string out = "{";
  for (std::size_t i = 0; i < grouped.size();) {
    std::size_t j = i;
    while (j < grouped.size() && grouped[j].label == grouped[i].label) require_valid(grouped[j++]);
    if (i) out += ", ";
    out += json_string(grouped[i].label) + ": ";
    if (j - i == 1) {
      out += json_interval(grouped[i].interval);
    } else {
      out += "[";
      for (std::size_t k = i; k < j; ++k) {
        if (k > i) out += ", ";
        out += json_interval(grouped[k].interval);
      }
      out += "]";
    }
    i = j;
  }
  return out + "}";
}

std::string format_dac_time(double seconds) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), seconds, std::chars_format::fixed, 3);
  if (ec != std::errc() || !std::isfinite(seconds) || seconds < 0.0) {
    throw Error(Errc::kInvalidArgument, "timestamp not serializable");
  }
  std::string s(buf, end);
  if (s.back() == '0') s.pop_back();
  return s;
}

std::string serialize_dac(const std::vector<Event>& events) {
  std::string out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    require_valid(e);
    if (e.label.find_first_of("\r\n") != std::string::npos ||
        is_ws(e.label.front()) || is_ws(e.label.back())) {
      throw Error(Errc::kInvalidArgument, "caption not expressible on one trimmed line");
    }
    if (i) out += "\n";
    out += format_dac_time(e.interval.onset) + "-" + format_dac_time(e.interval.offset) + ", " + e.label;
  }
  return out;
}

std::string serialize_output(TaskKind task, const std::vector<Event>& events) {
  switch (task) {
    case TaskKind::AudioGrounding: return serialize_ag(events);
    case TaskKind::SoundEventDetection: return serialize_sed(events);
    case TaskKind::DenseAudioCaptioning: return serialize_dac(events);
  }
  return {};
}

}  // namespace tempora
