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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tempora {

/// Closed [onset, offset] segment on the clip timeline, in seconds.
struct TimeInterval {
  double onset = 0.0;
  double offset = 0.0;

  /// Checked constructor: both finite, non-negative, onset <= offset.
  static TimeInterval make(double onset, double offset);

  double length() const noexcept { return offset - onset; }
  bool valid() const noexcept;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Overlap length, max(0, min(offsets) - max(onsets)).
double intersect(const TimeInterval& a, const TimeInterval& b) noexcept;

/// len(a) + len(b) - intersect(a, b).
double union_length(const TimeInterval& a, const TimeInterval& b) noexcept;

struct Event {
  std::string label;
  TimeInterval interval;

  friend bool operator==(const Event&, const Event&) = default;
};

struct EventList {
  std::string clip_id;
  double duration = 0.0;
  std::vector<Event> events;

  /// Throws Error(kInvalidArgument) when an invariant does not hold.
  void validate() const;
};

enum class TaskKind { AudioGrounding, SoundEventDetection, DenseAudioCaptioning };

std::string_view to_string(TaskKind task);

/// Accepts "ag", "sed", "dac" (case-insensitive) and the full names.
std::optional<TaskKind> parse_task_kind(std::string_view name);

/// Trim, collapse internal whitespace runs to one space, ASCII case-fold.
std::string normalize_label(std::string_view label);

}  // namespace tempora
