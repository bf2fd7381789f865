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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tempora/types.hpp"

namespace tempora {

/// Boundary tolerance for event-based matching, in seconds.
inline constexpr double kDefaultCollar = 0.2;

// Absolute slack on collar comparisons so decimal boundaries (|2.2 - 2.0|
// evaluates to 0.2000000000000002) sit inside the collar.
inline constexpr double kCollarSlack = 1e-9;

enum class OffsetMode { FixedCollar, CollarOrFraction };
enum class LabelMode { Exact, CaptionSimilarity };
enum class Averaging { Micro, ClassMacro };

struct MatchConfig {
  double collar = kDefaultCollar;
  OffsetMode offset_mode = OffsetMode::FixedCollar;
  /// CollarOrFraction: |offset delta| <= max(collar, fraction * ref length).
  double offset_fraction = 0.2;
  LabelMode label_mode = LabelMode::Exact;
  /// CaptionSimilarity: meteor_lite(pred, ref) >= threshold.
  double caption_sim_threshold = 0.5;
  /// Score of a clip (or corpus) with neither predictions nor references.
  bool empty_is_perfect = true;

  void validate() const;

  /// Defaults with the label mode the task uses (captions for DAC).
  static MatchConfig for_task(TaskKind task);
};

/// Named rates plus matching counts. Keys used by this library:
/// r_at_<t>, miou, eb_f1, eb_precision, eb_recall, meteor.
struct MetricReport {
  std::map<std::string, double> values;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t n_items = 0;

  /// Throws std::out_of_range for a missing key.
  double at(const std::string& key) const { return values.at(key); }

  /// Flat object: every value key, then tp, fp, fn, n_items.
  nlohmann::ordered_json to_json() const;
};

/// intersect / union_length; a zero-length union scores 1 for identical
/// points and 0 otherwise.
double iou(const TimeInterval& pred, const TimeInterval& gt) noexcept;

/// "r_at_0_5" for 0.5.
std::string recall_key(double threshold);

struct GroundingPair {
  std::optional<TimeInterval> pred;  // nullopt: missing or unparsable
  TimeInterval gt;
};

inline const std::vector<double> kDefaultRecallThresholds{0.5, 0.7, 0.9};

/// R@t = fraction of pairs with iou >= t; miou = mean iou. Empty input gives
/// zeros with n_items = 0.
MetricReport grounding_metrics(std::span<const GroundingPair> pairs,
                               std::span<const double> thresholds = kDefaultRecallThresholds);

/// Mean over reference events of the best IoU achieved by a prediction with
/// the same normalized label. No references: 1 if there are no predictions
/// (under empty_is_perfect), else 0.
double clip_miou(const EventList& preds, const EventList& refs, bool empty_is_perfect = true);

/// Best same-label prediction interval per reference event, in ref order.
std::vector<GroundingPair> grounding_pairs(const EventList& preds, const EventList& refs);

/// Whether pred may be matched to ref under cfg.
bool eligible(const Event& pred, const Event& ref, const MatchConfig& cfg);

struct MatchResult {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (pred index, ref index)
  std::size_t n_pred = 0;
  std::size_t n_ref = 0;

  std::int64_t tp() const { return static_cast<std::int64_t>(pairs.size()); }
  std::int64_t fp() const { return static_cast<std::int64_t>(n_pred - pairs.size()); }
  std::int64_t fn() const { return static_cast<std::int64_t>(n_ref - pairs.size()); }
};

/// One-to-one maximum-cardinality matching on the eligibility graph.
/// Throws Error(kClipMismatch) when clip ids differ.
MatchResult match_events(const EventList& preds, const EventList& refs, const MatchConfig& cfg);

/// Event-based precision / recall / F1 for one clip.
MetricReport eb_f1(const EventList& preds, const EventList& refs, const MatchConfig& cfg);

/// Corpus Eb-F1 over aligned clip lists. Micro sums TP/FP/FN over all clips;
/// ClassMacro averages per-label F1 (label = normalized reference label for
/// TP/FN, normalized prediction label for FP).
MetricReport eb_f1_corpus(std::span<const EventList> preds, std::span<const EventList> refs,
                          const MatchConfig& cfg, Averaging averaging = Averaging::Micro);

/// Lowercase, drop ASCII punctuation, split on whitespace.
std::vector<std::string> caption_tokens(std::string_view text);

/// METEOR without the synonym stage: exact then Porter-stem unigram
/// alignment, fragmentation penalty 0.5 * (chunks / m)^3.
double meteor_lite(std::string_view candidate, std::string_view reference);

/// DAC clip scores. Matching uses caption similarity whatever cfg.label_mode
/// says. meteor = sum of meteor_lite over matched pairs / number of refs.
MetricReport dac_metrics(const EventList& preds, const EventList& refs, const MatchConfig& cfg);

/// Corpus DAC: micro Eb-F1 and meteor = total matched METEOR / total refs.
MetricReport dac_metrics_corpus(std::span<const EventList> preds,
                                std::span<const EventList> refs, const MatchConfig& cfg);

}  // namespace tempora
