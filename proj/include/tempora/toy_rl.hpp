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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "tempora/reward.hpp"
#include "tempora/rng.hpp"
#include "tempora/types.hpp"

namespace tempora {

/// Synthetic grounding clips: a saliency track with rectangular bumps over
/// the target events.
struct EnvConfig {
  double clip_duration = 10.0;
  double frame_rate = 25.0;
  int n_events_min = 1;
  int n_events_max = 1;
  double min_event_len = 0.5;
  double max_event_len = 3.0;
  double saliency_snr = 4.0;
  double noise_std = 0.25;
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t frame_count() const;
};

enum class Split { Train, HeldOut };

struct Observation {
  std::vector<double> saliency;       // one value per frame
  std::vector<TimeInterval> targets;  // hidden ground truth, sorted by onset
  double duration = 0.0;
  double frame_rate = 0.0;

  const TimeInterval& target() const { return targets.front(); }
};

/// Deterministic in (cfg.seed, split, episode_index). Training and held-out
/// episodes come from separate RNG streams.
Observation env_sample(const EnvConfig& cfg, std::uint64_t episode_index,
                       Split split = Split::Train);

inline constexpr std::size_t kNumFeatures = 3;
using Features = std::array<double, kNumFeatures>;

/// (saliency-mass centroid, first crossing, last crossing), in seconds. The
/// crossing level is halfway between the median and the peak; mass counts
/// saliency above that level. A flat track yields (duration/2, 0, duration).
Features policy_features(const Observation& obs);

inline constexpr double kMinPolicyStd = 1e-3;

/// Linear-Gaussian boundary policy:
///   onset  ~ N(w_on . f + b_on,  exp(log_std_on)^2)
///   offset ~ N(w_off . f + b_off, exp(log_std_off)^2)
struct PolicyParams {
  Features w_on{};
  Features w_off{};
  double b_on = 0.0;
  double b_off = 0.0;
  double log_std_on = 0.0;
  double log_std_off = 0.0;

  static constexpr std::size_t kSize = 2 * kNumFeatures + 4;

  std::array<double, kSize> flatten() const;
  static PolicyParams unflatten(const std::array<double, kSize>& v);
  bool finite() const;

  /// Clamps log_std so std stays within [kMinPolicyStd, duration].
  void clamp_log_std(double duration);

  /// Starting point for training: boundaries shrunk 15% toward t = 0 and a
  /// 0.25 s exploration std.
  static PolicyParams initial();

  nlohmann::ordered_json to_json() const;

  friend bool operator==(const PolicyParams&, const PolicyParams&) = default;
};

struct PolicyAction {
  double raw_onset = 0.0;   // pre-clamp samples; logprob and gradients use these
  double raw_offset = 0.0;
  TimeInterval interval;    // clamped to [0, duration] and ordered
  double logprob = 0.0;
};

/// Effective std: exp(log_std) clamped to [kMinPolicyStd, duration].
double policy_std(double log_std, double duration);

/// (mu_on, mu_off).
std::array<double, 2> policy_mean(const PolicyParams& params, const Features& f);

/// Means clamped and ordered like a sampled action; used for evaluation.
TimeInterval policy_mean_interval(const PolicyParams& params, const Observation& obs);

PolicyAction policy_act(const PolicyParams& params, const Observation& obs, Rng& rng);

/// Gaussian log-density of the raw (pre-clamp) action.
double policy_logprob(const PolicyParams& params, const Observation& obs, double raw_onset,
                      double raw_offset);

/// Analytic gradient of policy_logprob with respect to every parameter. A
/// log_std whose std is clamped gets zero gradient.
PolicyParams logprob_grad(const PolicyParams& params, const Observation& obs, double raw_onset,
                          double raw_offset);

struct TrainConfig {
  std::size_t iterations = 2000;
  double lr = 5e-5;
  RewardMode mode = RewardMode::Adaptive;
  double collar = kDefaultCollar;
  std::size_t eval_clips = 200;

  void validate() const;
};

struct IterationStats {
  std::size_t iteration = 0;
  double mean_r_main = 0.0;
  double mean_r_aux = 0.0;
  bool main_degenerate = false;  // Var(r_main) < epsilon
  bool zero_advantage = false;
  bool used_fusion = false;
  double heldout_miou = 0.0;     // after this iteration's update
  double heldout_ebf1 = 0.0;
};

struct HeldOutScore {
  double miou = 0.0;
  double eb_f1 = 0.0;
};

/// Fixed evaluation clips (held-out split, indices 0..n-1) with features
/// precomputed; scores the deterministic mean action.
class HeldOutSet {
 public:
  HeldOutSet(const EnvConfig& env, std::size_t n_clips, double collar);

  HeldOutScore evaluate(const PolicyParams& params) const;
  std::size_t size() const noexcept { return clips_.size(); }

 private:
  struct Clip {
    Observation obs;
    Features features;
    std::vector<Event> refs;
  };
  std::vector<Clip> clips_;
  double collar_;
};

struct TrainReport {
  EnvConfig env;
  RewardConfig reward;
  TrainConfig train;
  PolicyParams initial_params;
  PolicyParams final_params;
  HeldOutScore initial_heldout;
  HeldOutScore final_heldout;
  std::vector<IterationStats> iterations;

  double zero_adv_fraction() const;
  double used_fusion_rate() const;
  double main_degenerate_fraction() const;

  nlohmann::ordered_json to_json() const;

  /// Header: iteration,mean_r_main,mean_r_aux,zero_adv_frac,used_fusion_rate,
  /// heldout_miou,heldout_ebf1
  std::string curves_csv() const;
};

/// GRPO-style REINFORCE on audio-grounding clips. Each iteration draws one
/// training clip, samples reward.group_size rollouts, scores each through the
/// AG output grammar, fuses rewards per train.mode, normalizes advantages and
/// applies params += lr * sum_i A_i * grad log pi(a_i). Throws
/// Error(kDiverged) if a parameter becomes non-finite.
TrainReport train(const PolicyParams& initial, const EnvConfig& env, const RewardConfig& reward,
                  const TrainConfig& train);

}  // namespace tempora
