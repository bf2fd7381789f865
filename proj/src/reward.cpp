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

#include "tempora/reward.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tempora/error.hpp"
#include "tempora/parsers.hpp"

namespace tempora {
namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(Errc::kNonFinite, std::string(what) + " contains a non-finite value");
  }
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::string_view to_string(RewardMode mode) {
  return mode == RewardMode::Adaptive ? "adaptive" : "main_only";
}

std::string_view to_string(MetricId metric) {
  switch (metric) {
    case MetricId::EbF1: return "eb_f1";
    case MetricId::MIoU: return "miou";
    case MetricId::Meteor: return "meteor";
  }
  return "?";
}

void RewardConfig::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw Error(Errc::kInvalidArgument, "epsilon must be > 0");
  }
  if (group_size < 2) throw Error(Errc::kInvalidArgument, "group_size must be >= 2");
  if (!(advantage_std_floor > 0.0) || !std::isfinite(advantage_std_floor)) {
    throw Error(Errc::kInvalidArgument, "advantage_std_floor must be > 0");
  }
}

RewardConfig RewardConfig::for_task(TaskKind task) {
  RewardConfig cfg;
  cfg.aux_metric = task == TaskKind::DenseAudioCaptioning ? MetricId::Meteor : MetricId::MIoU;
  return cfg;
}

SampleReward sample_reward(TaskKind task, std::string_view prediction_text,
                           const EventList& refs, const MatchConfig& cfg) {
  refs.validate();
  const ParseResult parsed = parse_output(task, prediction_text);
  if (!parsed) return {};
  const EventList preds{refs.clip_id, refs.duration, parsed.value().events};
  if (task == TaskKind::DenseAudioCaptioning) {
    const MetricReport r = dac_metrics(preds, refs, cfg);
    return {r.at("eb_f1"), r.at("meteor")};
  }
  MatchConfig exact = cfg;
  exact.label_mode = LabelMode::Exact;
  return {eb_f1(preds, refs, exact).at("eb_f1"), clip_miou(preds, refs, cfg.empty_is_perfect)};
}

double population_variance(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean = mean_of(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

AdaptiveReward adaptive_reward(std::span<const double> r_main, std::span<const double> r_aux,
                               double epsilon) {
  if (r_main.size() != r_aux.size() || r_main.size() < 2) {
    throw Error(Errc::kLengthMismatch, "r_main has " + std::to_string(r_main.size()) +
                                           " entries, r_aux " + std::to_string(r_aux.size()) +
                                           " (need equal lengths >= 2)");
  }
  require_finite(r_main, "r_main");
  require_finite(r_aux, "r_aux");
  AdaptiveReward out;
  out.used_fusion = population_variance(r_main) < epsilon;
  out.fused.resize(r_main.size());
  for (std::size_t i = 0; i < r_main.size(); ++i) {
    out.fused[i] = out.used_fusion ? r_main[i] * r_aux[i] : r_main[i];
  }
  return out;
}

std::vector<double> grpo_advantages(std::span<const double> fused, double std_floor) {
  if (fused.size() < 2) throw Error(Errc::kLengthMismatch, "advantages need a group of >= 2");
  require_finite(fused, "rewards");
  std::vector<double> adv(fused.size(), 0.0);
  const double sd = std::sqrt(population_variance(fused));
  if (sd < std_floor) return adv;
  const double mean = mean_of(fused);
  for (std::size_t i = 0; i < fused.size(); ++i) adv[i] = (fused[i] - mean) / sd;
  return adv;
}

bool GroupRewardBundle::zero_advantage() const {
  return std::all_of(advantages.begin(), advantages.end(), [](double a) { return a == 0.0; });
}

nlohmann::ordered_json GroupRewardBundle::to_json() const {
  nlohmann::ordered_json j;
  j["r_main"] = r_main;
  j["r_aux"] = r_aux;
  j["fused"] = fused;
  j["advantages"] = advantages;
  j["used_fusion"] = used_fusion;
  return j;
}

GroupRewardBundle score_group(std::span<const double> r_main, std::span<const double> r_aux,
                              const RewardConfig& cfg, RewardMode mode) {
  cfg.validate();
  GroupRewardBundle b;
  b.r_main.assign(r_main.begin(), r_main.end());
  b.r_aux.assign(r_aux.begin(), r_aux.end());
  AdaptiveReward fused = adaptive_reward(r_main, r_aux, cfg.epsilon);
  if (mode == RewardMode::MainOnly) {
    b.fused = b.r_main;
    b.used_fusion = false;
  } else {
    b.fused = std::move(fused.fused);
    b.used_fusion = fused.used_fusion;
  }
  b.advantages = grpo_advantages(b.fused, cfg.advantage_std_floor);
  return b;
}

}  // namespace tempora
