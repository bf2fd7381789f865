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

namespace tempora {

// Audio encoder output rate and the timestamp grid it supports at full
// resolution: one timestamp token per encoder frame, 0.04 s .. 30.00 s.
inline constexpr double kFrameRateHz = 25.0;
inline constexpr double kTimestampStride = 0.04;
inline constexpr double kMaxTime = 30.0;
inline constexpr std::size_t kNumTimestampTokens = 750;

/// A timestamp vocabulary entry such as "<0.04>".
struct TimestampToken {
  std::string surface;
  double time = 0.0;

  /// Surface without the angle brackets ("0.04"); the string that gets
  /// tokenized for semantic initialization.
  std::string numeric() const { return surface.substr(1, surface.size() - 2); }

  friend bool operator==(const TimestampToken&, const TimestampToken&) = default;
};

/// Renders a time with exactly two decimals, e.g. 0.04 -> "0.04", 30 -> "30.00".
std::string format_time_2dp(double seconds);

/// "<" + format_time_2dp(t) + ">", with time set to the decimal the surface shows.
TimestampToken make_timestamp_token(double seconds);

class TimestampVocab {
 public:
  /// Tokens at stride, 2*stride, ..., max_time. max_time must be an exact
  /// multiple of stride and every time must survive two-decimal rendering;
  /// otherwise Error(kInvalidStride).
  explicit TimestampVocab(double stride = kTimestampStride, double max_time = kMaxTime);

  double stride() const noexcept { return stride_; }
  double max_time() const noexcept { return max_time_; }
  const std::vector<TimestampToken>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }

 private:
  double stride_;
  double max_time_;
  std::vector<TimestampToken> tokens_;
};

struct AudioFrame {
  std::size_t index = 0;
  friend bool operator==(const AudioFrame&, const AudioFrame&) = default;
};

struct TextToken {
  std::string text;
  friend bool operator==(const TextToken&, const TextToken&) = default;
};

using SequenceItem = std::variant<AudioFrame, TimestampToken, TextToken>;

struct PromptSequence {
  std::vector<SequenceItem> items;
  double frame_rate = kFrameRateHz;
  double duration = 0.0;

  std::size_t audio_frame_count() const;
  std::size_t timestamp_count() const;
};

/// Interleaves one placeholder per encoder frame (ceil(duration * frame_rate)
/// frames) with a timestamp token after every frame whose end time lands on
/// the timestamp grid. The padded final frame keeps its grid timestamp.
///
/// Errors: kInvalidArgument for non-positive inputs, kDurationTooLong when
/// duration > max_time, kInvalidStride when the stride is not a positive
/// integer multiple of the frame period (or not two-decimal representable).
PromptSequence build_time_prompt(double duration, double frame_rate = kFrameRateHz,
                                 double timestamp_stride = kTimestampStride,
                                 double max_time = kMaxTime);

/// "<s><audio>" + items + "</audio>" + question + "</s>". Audio frames render
/// as "<AUDIO>", timestamps as their surface, text tokens verbatim.
std::string render_prompt(const PromptSequence& seq, std::string_view question);

}  // namespace tempora
