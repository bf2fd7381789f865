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

#include "tempora/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "tempora/error.hpp"
#include "tempora/matching.hpp"
#include "tempora/stemmer.hpp"

namespace tempora {
namespace {

constexpr double kRecallSlack = 1e-12;

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Prf prf(std::int64_t tp, std::int64_t fp, std::int64_t fn, bool empty_is_perfect) {
  if (tp + fp + fn == 0) {
    const double v = empty_is_perfect ? 1.0 : 0.0;
    return {v, v, v};
  }
  Prf out;
  if (tp + fp > 0) out.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  if (tp + fn > 0) out.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

void put_prf(MetricReport& r, bool empty_is_perfect) {
  const Prf p = prf(r.tp, r.fp, r.fn, empty_is_perfect);
  r.values["eb_precision"] = p.precision;
  r.values["eb_recall"] = p.recall;
  r.values["eb_f1"] = p.f1;
}

void check_same_clip(const EventList& preds, const EventList& refs) {
  if (preds.clip_id != refs.clip_id) {
    throw Error(Errc::kClipMismatch, "prediction clip '" + preds.clip_id +
                                         "' scored against reference clip '" + refs.clip_id + "'");
  }
}

void check_aligned(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(Errc::kLengthMismatch, std::to_string(a) + " prediction clips vs " +
                                           std::to_string(b) + " reference clips");
  }
}

}  // namespace

void MatchConfig::validate() const {
  if (!(collar >= 0.0) || !std::isfinite(collar)) {
    throw Error(Errc::kInvalidArgument, "collar must be >= 0");
  }
  if (offset_mode == OffsetMode::CollarOrFraction &&
      !(offset_fraction > 0.0 && offset_fraction <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "offset fraction must be in (0, 1]");
  }
  if (!(caption_sim_threshold >= 0.0 && caption_sim_threshold <= 1.0)) {
    throw Error(Errc::kInvalidArgument, "caption similarity threshold must be in [0, 1]");
  }
}

MatchConfig MatchConfig::for_task(TaskKind task) {
  MatchConfig cfg;
  if (task == TaskKind::DenseAudioCaptioning) cfg.label_mode = LabelMode::CaptionSimilarity;
  return cfg;
}

nlohmann::ordered_json MetricReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [key, value] : values) j[key] = value;
  j["tp"] = tp;
  j["fp"] = fp;
  j["fn"] = fn;
  j["n_items"] = n_items;
  return j;
}

double iou(const TimeInterval& pred, const TimeInterval& gt) noexcept {
  const double u = union_length(pred, gt);
  if (u <= 0.0) return pred == gt ? 1.0 : 0.0;
  return std::clamp(intersect(pred, gt) / u, 0.0, 1.0);
}

std::string recall_key(double threshold) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), threshold);
  std::string s = (ec == std::errc()) ? std::string(buf, end) : std::string("nan");
  std::replace(s.begin(), s.end(), '.', '_');
  return "r_at_" + s;
}

MetricReport grounding_metrics(std::span<const GroundingPair> pairs,
                               std::span<const double> thresholds) {
  for (double t : thresholds) {
    if (!(t > 0.0 && t <= 1.0)) throw Error(Errc::kInvalidArgument, "recall threshold outside (0, 1]");
  }
  MetricReport r;
  r.n_items = static_cast<std::int64_t>(pairs.size());
  std::vector<double> ious;
  ious.reserve(pairs.size());
  for (const auto& p : pairs) ious.push_back(p.pred ? iou(*p.pred, p.gt) : 0.0);

  double sum = 0.0;
  for (double v : ious) sum += v;
  r.values["miou"] = ious.empty() ? 0.0 : sum / static_cast<double>(ious.size());
  for (double t : thresholds) {
    const auto hits = std::count_if(ious.begin(), ious.end(),
                                    [t](double v) { return v >= t - kRecallSlack; });
    r.values[recall_key(t)] =
        ious.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(ious.size());
  }
  return r;
}

std::vector<GroundingPair> grounding_pairs(const EventList& preds, const EventList& refs) {
  std::vector<GroundingPair> out;
  out.reserve(refs.events.size());
  for (const auto& ref : refs.events) {
    const std::string label = normalize_label(ref.label);
    GroundingPair pair{std::nullopt, ref.interval};
    double best = -1.0;
    for (const auto& pred : preds.events) {
      if (normalize_label(pred.label) != label) continue;
      const double v = iou(pred.interval, ref.interval);
      if (v > best) {
        best = v;
        pair.pred = pred.interval;
      }
    }
    out.push_back(pair);
  }
  return out;
}

double clip_miou(const EventList& preds, const EventList& refs, bool empty_is_perfect) {
  if (refs.events.empty()) return (preds.events.empty() && empty_is_perfect) ? 1.0 : 0.0;
  const auto pairs = grounding_pairs(preds, refs);
  return grounding_metrics(pairs, {}).at("miou");
}

bool eligible(const Event& pred, const Event& ref, const MatchConfig& cfg) {
  const double on_delta = std::abs(pred.interval.onset - ref.interval.onset);
  if (on_delta > cfg.collar + kCollarSlack) return false;
  const double off_delta = std::abs(pred.interval.offset - ref.interval.offset);
  double off_tol = cfg.collar;
  if (cfg.offset_mode == OffsetMode::CollarOrFraction) {
    off_tol = std::max(cfg.collar, cfg.offset_fraction * ref.interval.length());
  }
  if (off_delta > off_tol + kCollarSlack) return false;
  if (cfg.label_mode == LabelMode::Exact) {
    return normalize_label(pred.label) == normalize_label(ref.label);
  }
  return meteor_lite(pred.label, ref.label) >= cfg.caption_sim_threshold;
}

MatchResult match_events(const EventList& preds, const EventList& refs, const MatchConfig& cfg) {
  check_same_clip(preds, refs);
  MatchResult result;
  result.n_pred = preds.events.size();
  result.n_ref = refs.events.size();
  std::vector<std::vector<int>> adjacency(result.n_pred);
  for (std::size_t i = 0; i < result.n_pred; ++i) {
    for (std::size_t j = 0; j < result.n_ref; ++j) {
      if (eligible(preds.events[i], refs.events[j], cfg)) adjacency[i].push_back(static_cast<int>(j));
    }
  }
  const auto mate = max_bipartite_matching(result.n_pred, result.n_ref, adjacency);
  for (std::size_t i = 0; i < mate.size(); ++i) {
    if (mate[i] != kUnmatched) result.pairs.emplace_back(i, static_cast<std::size_t>(mate[i]));
  }
  return result;
}

MetricReport eb_f1(const EventList& preds, const EventList& refs, const MatchConfig& cfg) {
  cfg.validate();
  const MatchResult m = match_events(preds, refs, cfg);
  MetricReport r;
  r.tp = m.tp();
  r.fp = m.fp();
  r.fn = m.fn();
  r.n_items = 1;
  put_prf(r, cfg.empty_is_perfect);
  return r;
}

MetricReport eb_f1_corpus(std::span<const EventList> preds, std::span<const EventList> refs,
                          const MatchConfig& cfg, Averaging averaging) {
  cfg.validate();
  check_aligned(preds.size(), refs.size());
  MetricReport r;
  r.n_items = static_cast<std::int64_t>(refs.size());
  struct Counts {
    std::int64_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Counts> per_class;
  for (std::size_t c = 0; c < refs.size(); ++c) {
    const MatchResult m = match_events(preds[c], refs[c], cfg);
    r.tp += m.tp();
    r.fp += m.fp();
    r.fn += m.fn();
    if (averaging == Averaging::ClassMacro) {
      std::vector<bool> pred_used(m.n_pred, false), ref_used(m.n_ref, false);
      for (auto [pi, ri] : m.pairs) {
        pred_used[pi] = ref_used[ri] = true;
        ++per_class[normalize_label(refs[c].events[ri].label)].tp;
      }
      for (std::size_t i = 0; i < m.n_pred; ++i) {
        if (!pred_used[i]) ++per_class[normalize_label(preds[c].events[i].label)].fp;
      }
      for (std::size_t j = 0; j < m.n_ref; ++j) {
        if (!ref_used[j]) ++per_class[normalize_label(refs[c].events[j].label)].fn;
      }
    }
  }
  if (averaging == Averaging::Micro) {
    put_prf(r, cfg.empty_is_perfect);
    return r;
  }
  if (per_class.empty()) {
    put_prf(r, cfg.empty_is_perfect);
    return r;
  }
  Prf mean;
  for (const auto& [label, k] : per_class) {
    const Prf p = prf(k.tp, k.fp, k.fn, cfg.empty_is_perfect);
    mean.precision += p.precision;
    mean.recall += p.recall;
    mean.f1 += p.f1;
  }
  const double n = static_cast<double>(per_class.size());
  r.values["eb_precision"] = mean.precision / n;
  r.values["eb_recall"] = mean.recall / n;
  r.values["eb_f1"] = mean.f1 / n;
  return r;
}

std::vector<std::string> caption_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double meteor_lite(std::string_view candidate, std::string_view reference) {
  const auto cand = caption_tokens(candidate);
  const auto ref = caption_tokens(reference);
  if (cand.empty() && ref.empty()) return 1.0;
  if (cand.empty() || ref.empty()) return 0.0;

  // align[i] = reference position matched to candidate token i.
  std::vector<int> align(cand.size(), -1);
  std::vector<bool> ref_used(ref.size(), false);
  auto stage = [&](const std::vector<std::string>& c, const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (align[i] != -1) continue;
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (!ref_used[j] && c[i] == r[j]) {
          align[i] = static_cast<int>(j);
          ref_used[j] = true;
          break;
        }
      }
    }
  };
  stage(cand, ref);
  std::vector<std::string> cand_stems, ref_stems;
  for (const auto& t : cand) cand_stems.push_back(porter_stem(t));
  for (const auto& t : ref) ref_stems.push_back(porter_stem(t));
  stage(cand_stems, ref_stems);

  std::size_t matches = 0;
  std::size_t chunks = 0;
  int prev_ref = -2;
  bool prev_matched = false;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (align[i] == -1) {
      prev_matched = false;
      continue;
    }
    ++matches;
    if (!prev_matched || align[i] != prev_ref + 1) ++chunks;
    prev_ref = align[i];
    prev_matched = true;
  }
  if (matches == 0) return 0.0;

  const double m = static_cast<double>(matches);
  const double precision = m / static_cast<double>(cand.size());
  const double recall = m / static_cast<double>(ref.size());
  const double fmean = 10.0 * precision * recall / (recall + 9.0 * precision);
  const double frag = static_cast<double>(chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

namespace {

double matched_meteor_sum(const EventList& preds, const EventList& refs, const MatchResult& m) {
  double sum = 0.0;
  for (auto [pi, ri] : m.pairs) sum += meteor_lite(preds.events[pi].label, refs.events[ri].label);
  return sum;
}

MatchConfig caption_config(const MatchConfig& cfg) {
  MatchConfig out = cfg;
  out.label_mode = LabelMode::CaptionSimilarity;
  out.validate();
  return out;
}

double meteor_component(double sum, std::int64_t n_ref, std::int64_t n_pred, bool empty_is_perfect) {
  if (n_ref == 0) return (n_pred == 0 && empty_is_perfect) ? 1.0 : 0.0;
  return sum / static_cast<double>(n_ref);
}

}  // namespace

MetricReport dac_metrics(const EventList& preds, const EventList& refs, const MatchConfig& cfg) {
  const MatchConfig cap = caption_config(cfg);
  const MatchResult m = match_events(preds, refs, cap);
  MetricReport r;
  r.tp = m.tp();
  r.fp = m.fp();
  r.fn = m.fn();
  r.n_items = 1;
  put_prf(r, cap.empty_is_perfect);
  r.values["meteor"] = meteor_component(matched_meteor_sum(preds, refs, m),
                                        static_cast<std::int64_t>(m.n_ref),
                                        static_cast<std::int64_t>(m.n_pred), cap.empty_is_perfect);
  return r;
}

MetricReport dac_metrics_corpus(std::span<const EventList> preds,
                                std::span<const EventList> refs, const MatchConfig& cfg) {
  const MatchConfig cap = caption_config(cfg);
  check_aligned(preds.size(), refs.size());
  MetricReport r;
  r.n_items = static_cast<std::int64_t>(refs.size());
  double meteor_sum = 0.0;
  std::int64_t n_ref = 0, n_pred = 0;
  for (std::size_t c = 0; c < refs.size(); ++c) {
    const MatchResult m = match_events(preds[c], refs[c], cap);
    r.tp += m.tp();
    r.fp += m.fp();
    r.fn += m.fn();
    n_ref += static_cast<std::int64_t>(m.n_ref);
    n_pred += static_cast<std::int64_t>(m.n_pred);
    meteor_sum += matched_meteor_sum(preds[c], refs[c], m);
  }
  put_prf(r, cap.empty_is_perfect);
  r.values["meteor"] = meteor_component(meteor_sum, n_ref, n_pred, cap.empty_is_perfect);
  return r;
}

}  // namespace tempora
