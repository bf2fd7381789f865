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
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tempora/metrics.hpp"
#include "tempora/types.hpp"

namespace tempora {

/// Variance threshold below which the main reward counts as degenerate.
inline constexpr double kDefaultEpsilon = 1e-6;
inline constexpr std::size_t kDefaultGroupSize = 4;
inline constexpr double kDefaultAdvantageStdFloor = 1e-8;

enum class RewardMode { Adaptive, MainOnly };

enum class MetricId { EbF1, MIoU, Meteor };

std::string_view to_string(RewardMode mode);
std::string_view to_string(MetricId metric);

struct RewardConfig {
  double epsilon = kDefaultEpsilon;
  std::size_t group_size = kDefaultGroupSize;
  double advantage_std_floor = kDefaultAdvantageStdFloor;
  MetricId main_metric = MetricId::EbF1;
  MetricId aux_metric = MetricId::MIoU;

  void validate() const;

  /// Eb-F1 main reward; mIoU auxiliary for AG/SED, METEOR for DAC.
  static RewardConfig for_task(TaskKind task);
};

struct SampleReward {
  double main = 0.0;
  double aux = 0.0;
};

/// Parses prediction_text with the task grammar and scores it against refs.
/// Any parse failure scores (0, 0). main = clip Eb-F1; aux = clip_miou for
/// AG/SED and DAC meteor for DAC. refs must satisfy EventList::validate().
SampleReward sample_reward(TaskKind task, std::string_view prediction_text,
                           const EventList& refs, const MatchConfig& cfg);

/// Population variance (divides by n).
double population_variance(std::span<const double> values);

struct AdaptiveReward {
  std::vector<double> fused;
  bool used_fusion = false;
};

/// fused = r_main * r_aux (elementwise) when Var(r_main) < epsilon, else
/// r_main. Errors: kLengthMismatch (unequal or fewer than two entries),
/// kNonFinite.
AdaptiveReward adaptive_reward(std::span<const double> r_main, std::span<const double> r_aux,
                               double epsilon = kDefaultEpsilon);

/// A_i = (R_i - mean) / std_pop, or all zeros when std_pop < std_floor.
std::vector<double> grpo_advantages(std::span<const double> fused,
                                    double std_floor = kDefaultAdvantageStdFloor);

struct GroupRewardBundle {
  std::vector<double> r_main;
  std::vector<double> r_aux;
  std::vector<double> fused;
  std::vector<double> advantages;
  bool used_fusion = false;

  /// Every advantage is zero: the group carries no learning signal.
  bool zero_advantage() const;

  nlohmann::ordered_json to_json() const;
};

/// adaptive_reward (or r_main unchanged in MainOnly mode) followed by
/// grpo_advantages.
GroupRewardBundle score_group(std::span<const double> r_main, std::span<const double> r_aux,
                              const RewardConfig& cfg, RewardMode mode = RewardMode::Adaptive);

}  // namespace tempora
