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

#include "tempora/prompt.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <system_error>

#include "tempora/error.hpp"

namespace tempora {
namespace {

constexpr double kGridTol = 1e-9;

bool near_integer(double x, long long* rounded) {
  const double r = std::round(x);
  *rounded = static_cast<long long>(r);
  return std::abs(x - r) <= kGridTol * std::max(1.0, std::abs(x));
}

bool renders_exactly(double seconds) {
  const std::string s = format_time_2dp(seconds);
  double back = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), back);
  return std::abs(back - seconds) <= kGridTol * std::max(1.0, seconds);
}

}  // namespace

std::string format_time_2dp(double seconds) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), seconds,
                                 std::chars_format::fixed, 2);
  if (ec != std::errc()) throw Error(Errc::kInvalidArgument, "time not formattable");
  return std::string(buf, end);
}

TimestampToken make_timestamp_token(double seconds) {
  // Carry the value the surface denotes: 35 * 0.04 is 1.4000000000000001, "<1.40>" is 1.4.
  const std::string text = format_time_2dp(seconds);
  double time = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), time);
  return TimestampToken{"<" + text + ">", time};
}

TimestampVocab::TimestampVocab(double stride, double max_time)
    : stride_(stride), max_time_(max_time) {
  if (!(stride > 0.0) || !(max_time > 0.0) || !std::isfinite(stride) ||
      !std::isfinite(max_time)) {
    throw Error(Errc::kInvalidArgument, "stride and max_time must be positive");
  }
  long long count = 0;
  if (!near_integer(max_time / stride, &count) || count < 1) {
    throw Error(Errc::kInvalidStride, "max_time is not a multiple of the stride");
  }
  tokens_.reserve(static_cast<std::size_t>(count));
  for (long long i = 1; i <= count; ++i) {
    const double t = static_cast<double>(i) * stride;
    if (!renders_exactly(t)) {
      throw Error(Errc::kInvalidStride,
                  "time " + std::to_string(t) + " has no exact two-decimal surface");
    }
    tokens_.push_back(make_timestamp_token(t));
  }
}

std::size_t PromptSequence::audio_frame_count() const {
  std::size_t n = 0;
  for (const auto& item : items) n += std::holds_alternative<AudioFrame>(item);
  return n;
}

std::size_t PromptSequence::timestamp_count() const {
  std::size_t n = 0;
  for (const auto& item : items) n += std::holds_alternative<TimestampToken>(item);
  return n;
}

PromptSequence build_time_prompt(double duration, double frame_rate,
                                 double timestamp_stride, double max_time) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(Errc::kInvalidArgument, "duration must be positive");
  }
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
    throw Error(Errc::kInvalidArgument, "frame_rate must be positive");
  }
  if (duration > max_time + kGridTol) {
    throw Error(Errc::kDurationTooLong, "duration " + std::to_string(duration) +
                                            " s exceeds " + std::to_string(max_time) + " s");
  }
  long long frames_per_stamp = 0;
  if (!(timestamp_stride > 0.0) ||
      !near_integer(timestamp_stride * frame_rate, &frames_per_stamp) ||
      frames_per_stamp < 1) {
    throw Error(Errc::kInvalidStride,
                "stride must be a positive integer multiple of the frame period");
  }
  if (!renders_exactly(timestamp_stride)) {
    throw Error(Errc::kInvalidStride, "stride has no exact two-decimal surface");
  }

  const double exact_frames = duration * frame_rate;
  long long n_frames = 0;
  if (!near_integer(exact_frames, &n_frames)) {
    n_frames = static_cast<long long>(std::ceil(exact_frames));
  }

  PromptSequence seq;
  seq.frame_rate = frame_rate;
  seq.duration = duration;
  seq.items.reserve(static_cast<std::size_t>(2 * n_frames));
  for (long long i = 0; i < n_frames; ++i) {
    seq.items.emplace_back(AudioFrame{static_cast<std::size_t>(i)});
    if ((i + 1) % frames_per_stamp == 0) {
      const long long k = (i + 1) / frames_per_stamp;
      seq.items.emplace_back(make_timestamp_token(static_cast<double>(k) * timestamp_stride));
    }
  }
  return seq;
}

std::string render_prompt(const PromptSequence& seq, std::string_view question) {
  std::string out = "<s><audio>";
  out.reserve(out.size() + seq.items.size() * 8 + question.size() + 16);
  for (const auto& item : seq.items) {
    if (std::holds_alternative<AudioFrame>(item)) {
      out += "<AUDIO>";
    } else if (const auto* ts = std::get_if<TimestampToken>(&item)) {
      out += ts->surface;
    } else {
      out += std::get<TextToken>(item).text;
    }
  }
  out += "</audio>";
  out += question;
  out += "</s>";
  return out;
}

}  // namespace tempora
