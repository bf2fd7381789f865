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

#include "tempora/toy_rl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "tempora/error.hpp"
#include "tempora/metrics.hpp"
#include "tempora/parsers.hpp"

namespace tempora {
namespace {

constexpr const char* kQuery = "target sound";
constexpr int kPlacementAttempts = 1000;

double dot(const Features& w, const Features& f) {
  return w[0] * f[0] + w[1] * f[1] + w[2] * f[2];
}

bool std_clamped(double log_std, double duration) {
  const double s = std::exp(log_std);
  return s < kMinPolicyStd || s > duration;
}

double gaussian_logpdf(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma) - 0.5 * z * z;
}

std::string csv_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

void EnvConfig::validate() const {
  if (!(clip_duration > 0.0) || !std::isfinite(clip_duration)) {
    throw Error(Errc::kInvalidArgument, "clip_duration must be positive");
  }
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
    throw Error(Errc::kInvalidArgument, "frame_rate must be positive");
  }
  if (n_events_min < 1 || n_events_max < n_events_min) {
    throw Error(Errc::kInvalidArgument, "need 1 <= n_events_min <= n_events_max");
  }
  if (!(min_event_len > 0.0) || !(min_event_len <= max_event_len) ||
      !(max_event_len < clip_duration)) {
    throw Error(Errc::kInvalidArgument, "need 0 < min_event_len <= max_event_len < clip_duration");
  }
  if (static_cast<double>(n_events_max) * min_event_len > clip_duration) {
    throw Error(Errc::kInvalidArgument, "n_events_max events of min_event_len do not fit the clip");
  }
  if (!std::isfinite(saliency_snr) || !(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw Error(Errc::kInvalidArgument, "saliency_snr must be finite and noise_std >= 0");
  }
}

std::size_t EnvConfig::frame_count() const {
  const double exact = clip_duration * frame_rate;
  const double r = std::round(exact);
  if (std::abs(exact - r) <= 1e-9 * std::max(1.0, exact)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(exact));
}

Observation env_sample(const EnvConfig& cfg, std::uint64_t episode_index, Split split) {
  cfg.validate();
  Rng rng = Rng::stream(cfg.seed, split == Split::Train ? "env/train" : "env/heldout", episode_index);

  Observation obs;
  obs.duration = cfg.clip_duration;
  obs.frame_rate = cfg.frame_rate;
  const auto n_events = rng.uniform_int(cfg.n_events_min, cfg.n_events_max);
  for (int attempt = 0; attempt < kPlacementAttempts &&
                        static_cast<std::int64_t>(obs.targets.size()) < n_events;
       ++attempt) {
    const double len = rng.uniform(cfg.min_event_len, cfg.max_event_len);
    const double onset = rng.uniform(0.0, cfg.clip_duration - len);
    const TimeInterval candidate{onset, onset + len};
    const bool overlaps = std::any_of(obs.targets.begin(), obs.targets.end(),
                                      [&](const TimeInterval& t) { return intersect(t, candidate) > 0.0; });
    if (!overlaps) obs.targets.push_back(candidate);
  }
  std::sort(obs.targets.begin(), obs.targets.end(),
            [](const TimeInterval& a, const TimeInterval& b) { return a.onset < b.onset; });

  const std::size_t n = cfg.frame_count();
  obs.saliency.assign(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double center = (static_cast<double>(k) + 0.5) / cfg.frame_rate;
    for (const auto& t : obs.targets) {
      if (center >= t.onset && center < t.offset) {
        obs.saliency[k] += cfg.saliency_snr;
        break;
      }
    }
    if (cfg.noise_std > 0.0) obs.saliency[k] += cfg.noise_std * rng.normal();
  }
  return obs;
}

Features policy_features(const Observation& obs) {
  const auto& s = obs.saliency;
  const Features flat{obs.duration / 2.0, 0.0, obs.duration};
  if (s.empty()) return flat;

  std::vector<double> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  const double median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  const double peak = sorted.back();
  if (!(peak > median)) return flat;
  const double level = median + 0.5 * (peak - median);

  std::size_t first = s.size(), last = 0;
  double mass = 0.0, moment = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] < level) continue;
    first = std::min(first, k);
    last = k;
    const double m = s[k] - level;
    mass += m;
    moment += m * (static_cast<double>(k) + 0.5) / obs.frame_rate;
  }
  const double centroid = mass > 0.0 ? moment / mass
                                     : (static_cast<double>(first) + static_cast<double>(last) + 1.0) /
                                           (2.0 * obs.frame_rate);
  return {centroid, static_cast<double>(first) / obs.frame_rate,
          static_cast<double>(last + 1) / obs.frame_rate};
}

std::array<double, PolicyParams::kSize> PolicyParams::flatten() const {
  return {w_on[0], w_on[1], w_on[2], w_off[0], w_off[1], w_off[2], b_on, b_off, log_std_on, log_std_off};
}

PolicyParams PolicyParams::unflatten(const std::array<double, kSize>& v) {
  PolicyParams p;
  p.w_on = {v[0], v[1], v[2]};
  p.w_off = {v[3], v[4], v[5]};
  p.b_on = v[6];
  p.b_off = v[7];
  p.log_std_on = v[8];
  p.log_std_off = v[9];
  return p;
}

bool PolicyParams::finite() const {
  const auto v = flatten();
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void PolicyParams::clamp_log_std(double duration) {
  const double lo = std::log(kMinPolicyStd), hi = std::log(duration);
  log_std_on = std::clamp(log_std_on, lo, hi);
  log_std_off = std::clamp(log_std_off, lo, hi);
}

PolicyParams PolicyParams::initial() {
  PolicyParams p;
  p.w_on = {0.0, 0.85, 0.0};
  p.w_off = {0.0, 0.0, 0.85};
  p.log_std_on = p.log_std_off = std::log(0.25);
  return p;
}

nlohmann::ordered_json PolicyParams::to_json() const {
  nlohmann::ordered_json j;
  j["w_on"] = w_on;
  j["w_off"] = w_off;
  j["b_on"] = b_on;
  j["b_off"] = b_off;
  j["log_std_on"] = log_std_on;
  j["log_std_off"] = log_std_off;
  return j;
}

double policy_std(double log_std, double duration) {
  return std::clamp(std::exp(log_std), kMinPolicyStd, std::max(kMinPolicyStd, duration));
}

std::array<double, 2> policy_mean(const PolicyParams& params, const Features& f) {
  return {dot(params.w_on, f) + params.b_on, dot(params.w_off, f) + params.b_off};
}

namespace {

TimeInterval clamp_order(double a, double b, double duration) {
  a = std::clamp(a, 0.0, duration);
  b = std::clamp(b, 0.0, duration);
  if (a > b) std::swap(a, b);
  return {a, b};
}

}  // namespace

TimeInterval policy_mean_interval(const PolicyParams& params, const Observation& obs) {
  const auto mu = policy_mean(params, policy_features(obs));
  return clamp_order(mu[0], mu[1], obs.duration);
}

PolicyAction policy_act(const PolicyParams& params, const Observation& obs, Rng& rng) {
  const auto mu = policy_mean(params, policy_features(obs));
  const double s_on = policy_std(params.log_std_on, obs.duration);
  const double s_off = policy_std(params.log_std_off, obs.duration);
  PolicyAction a;
  a.raw_onset = mu[0] + s_on * rng.normal();
  a.raw_offset = mu[1] + s_off * rng.normal();
  a.interval = clamp_order(a.raw_onset, a.raw_offset, obs.duration);
  a.logprob = gaussian_logpdf(a.raw_onset, mu[0], s_on) + gaussian_logpdf(a.raw_offset, mu[1], s_off);
  return a;
}

double policy_logprob(const PolicyParams& params, const Observation& obs, double raw_onset,
                      double raw_offset) {
  const auto mu = policy_mean(params, policy_features(obs));
  return gaussian_logpdf(raw_onset, mu[0], policy_std(params.log_std_on, obs.duration)) +
         gaussian_logpdf(raw_offset, mu[1], policy_std(params.log_std_off, obs.duration));
}

PolicyParams logprob_grad(const PolicyParams& params, const Observation& obs, double raw_onset,
                          double raw_offset) {
  const Features f = policy_features(obs);
  const auto mu = policy_mean(params, f);
  const double s_on = policy_std(params.log_std_on, obs.duration);
  const double s_off = policy_std(params.log_std_off, obs.duration);
  const double z_on = (raw_onset - mu[0]) / s_on;
  const double z_off = (raw_offset - mu[1]) / s_off;

  PolicyParams g;
  const double d_mu_on = z_on / s_on;
  const double d_mu_off = z_off / s_off;
  for (std::size_t i = 0; i < kNumFeatures; ++i) {
    g.w_on[i] = d_mu_on * f[i];
    g.w_off[i] = d_mu_off * f[i];
  }
  g.b_on = d_mu_on;
  g.b_off = d_mu_off;
  g.log_std_on = std_clamped(params.log_std_on, obs.duration) ? 0.0 : z_on * z_on - 1.0;
  g.log_std_off = std_clamped(params.log_std_off, obs.duration) ? 0.0 : z_off * z_off - 1.0;
  return g;
}

void TrainConfig::validate() const {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw Error(Errc::kInvalidArgument, "lr must be >= 0");
  if (!(collar >= 0.0)) throw Error(Errc::kInvalidArgument, "collar must be >= 0");
  if (eval_clips == 0) throw Error(Errc::kInvalidArgument, "eval_clips must be positive");
}

HeldOutSet::HeldOutSet(const EnvConfig& env, std::size_t n_clips, double collar) : collar_(collar) {
  clips_.reserve(n_clips);
  for (std::size_t i = 0; i < n_clips; ++i) {
    Clip c;
    c.obs = env_sample(env, i, Split::HeldOut);
    c.features = policy_features(c.obs);
    for (const auto& t : c.obs.targets) c.refs.push_back(Event{kQuery, t});
    clips_.push_back(std::move(c));
  }
}

HeldOutScore HeldOutSet::evaluate(const PolicyParams& params) const {
  MatchConfig cfg;
  cfg.collar = collar_;
  std::int64_t tp = 0, fp = 0, fn = 0;
  double miou_sum = 0.0;
  Event pred{kQuery, {}};
  for (const auto& c : clips_) {
    const auto mu = policy_mean(params, c.features);
    pred.interval = clamp_order(mu[0], mu[1], c.obs.duration);
    double clip_sum = 0.0;
    bool hit = false;
    for (const auto& ref : c.refs) {
      clip_sum += iou(pred.interval, ref.interval);
      hit = hit || eligible(pred, ref, cfg);
    }
    miou_sum += clip_sum / static_cast<double>(c.refs.size());
    tp += hit;
    fp += !hit;
    fn += static_cast<std::int64_t>(c.refs.size()) - hit;
  }
  HeldOutScore s;
  s.miou = clips_.empty() ? 0.0 : miou_sum / static_cast<double>(clips_.size());
  const double p = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double r = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  s.eb_f1 = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  return s;
}

double TrainReport::zero_adv_fraction() const {
  if (iterations.empty()) return 0.0;
  const auto n = std::count_if(iterations.begin(), iterations.end(),
                               [](const IterationStats& s) { return s.zero_advantage; });
  return static_cast<double>(n) / static_cast<double>(iterations.size());
}

double TrainReport::used_fusion_rate() const {
  if (iterations.empty()) return 0.0;
  const auto n = std::count_if(iterations.begin(), iterations.end(),
                               [](const IterationStats& s) { return s.used_fusion; });
  return static_cast<double>(n) / static_cast<double>(iterations.size());
}

double TrainReport::main_degenerate_fraction() const {
  if (iterations.empty()) return 0.0;
  const auto n = std::count_if(iterations.begin(), iterations.end(),
                               [](const IterationStats& s) { return s.main_degenerate; });
  return static_cast<double>(n) / static_cast<double>(iterations.size());
}

nlohmann::ordered_json TrainReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = env.seed;
  auto& cfg = j["config"];
  cfg["clip_duration"] = env.clip_duration;
  cfg["frame_rate"] = env.frame_rate;
  cfg["n_events_min"] = env.n_events_min;
  cfg["n_events_max"] = env.n_events_max;
  cfg["min_event_len"] = env.min_event_len;
  cfg["max_event_len"] = env.max_event_len;
  cfg["saliency_snr"] = env.saliency_snr;
  cfg["noise_std"] = env.noise_std;
  cfg["epsilon"] = reward.epsilon;
  cfg["group_size"] = reward.group_size;
  cfg["advantage_std_floor"] = reward.advantage_std_floor;
  cfg["main_metric"] = to_string(reward.main_metric);
  cfg["aux_metric"] = to_string(reward.aux_metric);
  cfg["iterations"] = train.iterations;
  cfg["lr"] = train.lr;
  cfg["mode"] = to_string(train.mode);
  cfg["collar"] = train.collar;
  cfg["eval_clips"] = train.eval_clips;

  j["initial_params"] = initial_params.to_json();
  j["final_params"] = final_params.to_json();
  j["initial_heldout"] = {{"miou", initial_heldout.miou}, {"eb_f1", initial_heldout.eb_f1}};
  j["final_heldout"] = {{"miou", final_heldout.miou}, {"eb_f1", final_heldout.eb_f1}};
  j["summary"] = {{"iterations", iterations.size()},
                  {"zero_adv_fraction", zero_adv_fraction()},
                  {"used_fusion_rate", used_fusion_rate()},
                  {"main_degenerate_fraction", main_degenerate_fraction()}};

  auto& per = j["per_iteration"];
  per["mean_r_main"] = nlohmann::ordered_json::array();
  per["mean_r_aux"] = nlohmann::ordered_json::array();
  per["main_degenerate"] = nlohmann::ordered_json::array();
  per["zero_advantage"] = nlohmann::ordered_json::array();
  per["used_fusion"] = nlohmann::ordered_json::array();
  for (const auto& s : iterations) {
    per["mean_r_main"].push_back(s.mean_r_main);
    per["mean_r_aux"].push_back(s.mean_r_aux);
    per["main_degenerate"].push_back(s.main_degenerate);
    per["zero_advantage"].push_back(s.zero_advantage);
    per["used_fusion"].push_back(s.used_fusion);
  }
  return j;
}

std::string TrainReport::curves_csv() const {
  std::string out =
      "iteration,mean_r_main,mean_r_aux,zero_adv_frac,used_fusion_rate,heldout_miou,heldout_ebf1\n";
  for (const auto& s : iterations) {
    out += std::to_string(s.iteration) + "," + csv_number(s.mean_r_main) + "," +
           csv_number(s.mean_r_aux) + "," + (s.zero_advantage ? "1" : "0") + "," +
           (s.used_fusion ? "1" : "0") + "," + csv_number(s.heldout_miou) + "," +
           csv_number(s.heldout_ebf1) + "\n";
  }
  return out;
}

TrainReport train(const PolicyParams& initial, const EnvConfig& env, const RewardConfig& reward,
                  const TrainConfig& tc) {
  env.validate();
  reward.validate();
  tc.validate();
  if (!initial.finite()) throw Error(Errc::kNonFinite, "initial policy parameters");

  TrainReport report;
  report.env = env;
  report.reward = reward;
  report.train = tc;
  report.initial_params = initial;
  report.initial_params.clamp_log_std(env.clip_duration);

  MatchConfig match;
  match.collar = tc.collar;
  const HeldOutSet heldout(env, tc.eval_clips, tc.collar);
  report.initial_heldout = heldout.evaluate(report.initial_params);

  PolicyParams params = report.initial_params;
  const std::size_t G = reward.group_size;
  std::vector<double> r_main(G), r_aux(G);
  std::vector<PolicyAction> actions(G);
  report.iterations.reserve(tc.iterations);

  for (std::size_t it = 0; it < tc.iterations; ++it) {
    const Observation obs = env_sample(env, it, Split::Train);
    EventList refs{"train-" + std::to_string(it), obs.duration, {}};
    for (const auto& t : obs.targets) refs.events.push_back(Event{kQuery, t});

    for (std::size_t i = 0; i < G; ++i) {
      Rng rng = Rng::stream(env.seed, "rollout", it * G + i);
      actions[i] = policy_act(params, obs, rng);
      const std::string text = serialize_ag({Event{kQuery, actions[i].interval}});
      const SampleReward r = sample_reward(TaskKind::AudioGrounding, text, refs, match);
      r_main[i] = r.main;
      r_aux[i] = r.aux;
    }

    const GroupRewardBundle bundle = score_group(r_main, r_aux, reward, tc.mode);

    std::array<double, PolicyParams::kSize> step{};
    for (std::size_t i = 0; i < G; ++i) {
      if (bundle.advantages[i] == 0.0) continue;
      const auto g = logprob_grad(params, obs, actions[i].raw_onset, actions[i].raw_offset).flatten();
      for (std::size_t k = 0; k < step.size(); ++k) step[k] += bundle.advantages[i] * g[k];
    }
    auto flat = params.flatten();
    for (std::size_t k = 0; k < flat.size(); ++k) flat[k] += tc.lr * step[k];
    params = PolicyParams::unflatten(flat);
    if (!params.finite()) {
      throw Error(Errc::kDiverged, "non-finite policy parameter at iteration " + std::to_string(it));
    }
    params.clamp_log_std(env.clip_duration);

    IterationStats s;
    s.iteration = it;
    s.mean_r_main = std::accumulate(r_main.begin(), r_main.end(), 0.0) / static_cast<double>(G);
    s.mean_r_aux = std::accumulate(r_aux.begin(), r_aux.end(), 0.0) / static_cast<double>(G);
    s.main_degenerate = population_variance(r_main) < reward.epsilon;
    s.zero_advantage = bundle.zero_advantage();
    s.used_fusion = bundle.used_fusion;
    const HeldOutScore h = heldout.evaluate(params);
    s.heldout_miou = h.miou;
    s.heldout_ebf1 = h.eb_f1;
    report.iterations.push_back(s);
  }
  report.final_params = params;
  report.final_heldout = report.iterations.empty() ? report.initial_heldout
                                                   : HeldOutScore{report.iterations.back().heldout_miou,
                                                                  report.iterations.back().heldout_ebf1};
  return report;
}

}  // namespace tempora
