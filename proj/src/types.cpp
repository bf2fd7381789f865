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

#include "tempora/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "tempora/error.hpp"

namespace tempora {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kDurationTooLong: return "DurationTooLong";
    case Errc::kInvalidStride: return "InvalidStride";
    case Errc::kEmptyTokenization: return "EmptyTokenization";
    case Errc::kUnknownTokenId: return "UnknownTokenId";
    case Errc::kTokenizerGap: return "TokenizerGap";
    case Errc::kCorruptFile: return "CorruptFile";
    case Errc::kClipMismatch: return "ClipMismatch";
    case Errc::kLengthMismatch: return "LengthMismatch";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kDiverged: return "Diverged";
    case Errc::kConfig: return "ConfigError";
    case Errc::kIo: return "IoError";
  }
  return "Unknown";
}

bool TimeInterval::valid() const noexcept {
  return std::isfinite(onset) && std::isfinite(offset) && onset >= 0.0 &&
         onset <= offset;
}

TimeInterval TimeInterval::make(double onset, double offset) {
  TimeInterval t{onset, offset};
  if (!t.valid()) {
    throw Error(Errc::kInvalidArgument,
                "invalid interval [" + std::to_string(onset) + ", " +
                    std::to_string(offset) + "]");
  }
  return t;
}

double intersect(const TimeInterval& a, const TimeInterval& b) noexcept {
  return std::max(0.0, std::min(a.offset, b.offset) - std::max(a.onset, b.onset));
}

double union_length(const TimeInterval& a, const TimeInterval& b) noexcept {
  return a.length() + b.length() - intersect(a, b);
}

void EventList::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw Error(Errc::kInvalidArgument, "clip '" + clip_id + "': duration must be > 0");
  }
  for (const auto& e : events) {
    if (normalize_label(e.label).empty()) {
      throw Error(Errc::kInvalidArgument, "clip '" + clip_id + "': empty event label");
    }
    if (!e.interval.valid() || e.interval.offset > duration) {
      throw Error(Errc::kInvalidArgument,
                  "clip '" + clip_id + "': event '" + e.label + "' outside [0, duration]");
    }
  }
}

std::string_view to_string(TaskKind task) {
  switch (task) {
    case TaskKind::AudioGrounding: return "ag";
    case TaskKind::SoundEventDetection: return "sed";
    case TaskKind::DenseAudioCaptioning: return "dac";
  }
  return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ag" || lower == "audiogrounding") return TaskKind::AudioGrounding;
  if (lower == "sed" || lower == "soundeventdetection") return TaskKind::SoundEventDetection;
  if (lower == "dac" || lower == "denseaudiocaptioning") return TaskKind::DenseAudioCaptioning;
  return std::nullopt;
}

std::string normalize_label(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  bool pending_space = false;
  for (unsigned char c : label) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

}  // namespace tempora
