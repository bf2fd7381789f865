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

#include "tempora/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "tempora/embedding.hpp"
#include "tempora/error.hpp"
#include "tempora/parsers.hpp"

namespace tempora::cli {
namespace {

using ojson = nlohmann::ordered_json;

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t\r\n") == std::string_view::npos; }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::kIo, "write failed: " + path.string());
}

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

EventList reference_from_json(const nlohmann::json& rec) {
  EventList refs;
  refs.clip_id = rec.at("id").get<std::string>();
  refs.duration = rec.at("duration").get<double>();
  for (const auto& e : rec.at("events")) {
    refs.events.push_back(Event{e.at("label").get<std::string>(),
                                TimeInterval{e.at("onset").get<double>(), e.at("offset").get<double>()}});
  }
  refs.validate();
  return refs;
}

}  // namespace

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    // References, in file order.
    std::vector<EventList> refs;
    std::unordered_map<std::string, std::size_t> ref_index;
    const auto ref_lines = read_lines(opts.references);
    for (std::size_t i = 0; i < ref_lines.size(); ++i) {
      if (blank(ref_lines[i])) continue;
      EventList r;
      try {
        r = reference_from_json(nlohmann::json::parse(ref_lines[i]));
      } catch (const std::exception& e) {
        err << location(opts.references, i + 1) << ": bad reference record: " << e.what() << "\n";
        return 1;
      }
      if (!ref_index.emplace(r.clip_id, refs.size()).second) {
        err << location(opts.references, i + 1) << ": duplicate id '" << r.clip_id << "'\n";
        return 1;
      }
      refs.push_back(std::move(r));
    }

    std::vector<std::optional<std::string>> raw(refs.size());
    const auto pred_lines = read_lines(opts.predictions);
    for (std::size_t i = 0; i < pred_lines.size(); ++i) {
      if (blank(pred_lines[i])) continue;
      std::string id, text;
      try {
        const auto rec = nlohmann::json::parse(pred_lines[i]);
        id = rec.at("id").get<std::string>();
        text = rec.at("raw_output").get<std::string>();
      } catch (const std::exception& e) {
        err << location(opts.predictions, i + 1) << ": bad prediction record: " << e.what() << "\n";
        return 1;
      }
      const auto it = ref_index.find(id);
      if (it == ref_index.end()) {
        err << location(opts.predictions, i + 1) << ": unknown id '" << id << "'\n";
        return 1;
      }
      if (raw[it->second]) {
        err << location(opts.predictions, i + 1) << ": duplicate id '" << id << "'\n";
        return 1;
      }
      raw[it->second] = std::move(text);
    }

    std::vector<EventList> preds(refs.size());
    std::int64_t parse_failures = 0, missing = 0;
    for (std::size_t c = 0; c < refs.size(); ++c) {
      preds[c].clip_id = refs[c].clip_id;
      preds[c].duration = refs[c].duration;
      if (!raw[c]) {
        ++missing;
        continue;
      }
      const ParseResult parsed = parse_output(opts.task, *raw[c]);
      if (parsed) {
        preds[c].events = parsed.value().events;
      } else {
        ++parse_failures;
      }
    }

    MatchConfig cfg = MatchConfig::for_task(opts.task);
    cfg.collar = opts.collar;
    cfg.caption_sim_threshold = opts.sim_threshold;

    ojson report;
    report["task"] = to_string(opts.task);
    report["n_clips"] = refs.size();
    report["scored_clips"] = static_cast<std::int64_t>(refs.size()) - parse_failures;
    report["parse_failures"] = parse_failures;
    report["missing_predictions"] = missing;

    MetricReport metrics;
    if (opts.task == TaskKind::DenseAudioCaptioning) {
      metrics = dac_metrics_corpus(preds, refs, cfg);
    } else {
      metrics = eb_f1_corpus(preds, refs, cfg, opts.averaging);
      std::vector<GroundingPair> pairs;
      for (std::size_t c = 0; c < refs.size(); ++c) {
        auto p = grounding_pairs(preds[c], refs[c]);
        pairs.insert(pairs.end(), p.begin(), p.end());
      }
      const MetricReport g = grounding_metrics(
          pairs, opts.task == TaskKind::AudioGrounding ? std::span<const double>(opts.thresholds)
                                                       : std::span<const double>());
      for (const auto& [k, v] : g.values) metrics.values[k] = v;
    }
    const ojson flat = metrics.to_json();
    for (const auto& [k, v] : flat.items()) report[k] = v;

    const std::string text = report.dump(2) + "\n";
    if (opts.out.empty()) {
      out << text;
    } else {
      write_text(opts.out, text);
    }
    return 0;
  } catch (const std::exception& e) {
    err << "eval: " << e.what() << "\n";
    return 1;
  }
}

int cmd_prompt(const PromptOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const PromptSequence seq = build_time_prompt(opts.duration, opts.frame_rate, opts.stride, opts.max_time);
    if (opts.format == "text") {
      out << render_prompt(seq, opts.question) << "\n";
      return 0;
    }
    if (opts.format != "json") {
      err << "prompt: unknown format '" << opts.format << "' (text|json)\n";
      return 1;
    }
    ojson j;
    j["duration"] = seq.duration;
    j["frame_rate"] = seq.frame_rate;
    j["stride"] = opts.stride;
    j["question"] = opts.question;
    j["n_audio_frames"] = seq.audio_frame_count();
    j["n_timestamps"] = seq.timestamp_count();
    ojson items = ojson::array();
    for (const auto& item : seq.items) {
      if (const auto* f = std::get_if<AudioFrame>(&item)) {
        items.push_back({{"type", "audio"}, {"index", f->index}});
      } else if (const auto* t = std::get_if<TimestampToken>(&item)) {
        items.push_back({{"type", "timestamp"}, {"surface", t->surface}, {"time", t->time}});
      } else {
        items.push_back({{"type", "text"}, {"text", std::get<TextToken>(item).text}});
      }
    }
    j["items"] = std::move(items);
    out << j.dump() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "prompt: " << e.what() << "\n";
    return 1;
  }
}

int cmd_embed_init(const EmbedInitOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const EmbeddingTable base = load_table(opts.base, opts.base_names);
    const ReferenceTokenizer tokenizer = ReferenceTokenizer::from_json_file(opts.tokenizer);
    const TimestampVocab vocab(opts.stride, opts.max_time);
    const EmbeddingTable table = build_timestamp_embeddings(vocab, tokenizer, base);
    save_table(table, opts.out);
    out << "added " << (table.size() - base.size()) << " frozen timestamp rows ("
        << table.size() << " total, dim " << table.dim() << ") -> " << opts.out.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "embed-init: " << e.what() << "\n";
    return 1;
  }
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw Error(Errc::kConfig, "invalid value '" + value + "' for key '" + key + "'");
  }
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

ToyConfig parse_toy_config(std::string_view text) {
  ToyConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (blank(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::kConfig, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.insert(key).second) throw Error(Errc::kConfig, "duplicate key '" + key + "'");

    if (key == "clip_duration") cfg.env.clip_duration = parse_number<double>(key, value);
    else if (key == "frame_rate") cfg.env.frame_rate = parse_number<double>(key, value);
    else if (key == "n_events_min") cfg.env.n_events_min = parse_number<int>(key, value);
    else if (key == "n_events_max") cfg.env.n_events_max = parse_number<int>(key, value);
    else if (key == "min_event_len") cfg.env.min_event_len = parse_number<double>(key, value);
    else if (key == "max_event_len") cfg.env.max_event_len = parse_number<double>(key, value);
    else if (key == "saliency_snr") cfg.env.saliency_snr = parse_number<double>(key, value);
    else if (key == "noise_std") cfg.env.noise_std = parse_number<double>(key, value);
    else if (key == "seed") cfg.env.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "epsilon") cfg.reward.epsilon = parse_number<double>(key, value);
    else if (key == "group_size") cfg.reward.group_size = parse_number<std::size_t>(key, value);
    else if (key == "advantage_std_floor") cfg.reward.advantage_std_floor = parse_number<double>(key, value);
    else if (key == "iterations") cfg.train.iterations = parse_number<std::size_t>(key, value);
    else if (key == "lr") cfg.train.lr = parse_number<double>(key, value);
    else if (key == "collar") cfg.train.collar = parse_number<double>(key, value);
    else if (key == "eval_clips") cfg.train.eval_clips = parse_number<std::size_t>(key, value);
    else throw Error(Errc::kConfig, "unknown key '" + key + "'");
  }
  try {
    cfg.env.validate();
    cfg.reward.validate();
    cfg.train.validate();
  } catch (const Error& e) {
    throw Error(Errc::kConfig, e.what());
  }
  return cfg;
}

int cmd_train_toy(const TrainToyOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    ToyConfig cfg;
    if (!opts.config.empty()) {
      std::ifstream in(opts.config, std::ios::binary);
      if (!in) throw Error(Errc::kIo, "cannot open " + opts.config.string());
      std::stringstream buf;
      buf << in.rdbuf();
      cfg = parse_toy_config(buf.str());
    }
    if (opts.seed) cfg.env.seed = *opts.seed;
    cfg.train.mode = opts.mode;

    const TrainReport report = train(PolicyParams::initial(), cfg.env, cfg.reward, cfg.train);
    write_text(opts.out, report.to_json().dump(2) + "\n");
    std::filesystem::path csv = opts.csv;
    if (csv.empty()) csv = std::filesystem::path(opts.out).replace_extension(".csv");
    write_text(csv, report.curves_csv());
    out << "mode=" << to_string(opts.mode) << " seed=" << cfg.env.seed
        << " heldout_miou " << report.initial_heldout.miou << " -> " << report.final_heldout.miou
        << " heldout_ebf1 " << report.initial_heldout.eb_f1 << " -> " << report.final_heldout.eb_f1
        << " zero_adv_fraction=" << report.zero_adv_fraction()
        << " used_fusion_rate=" << report.used_fusion_rate() << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "train-toy: " << e.what() << "\n";
    return 1;
  }
}

int cmd_reward(const RewardOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    RewardConfig cfg;
    cfg.epsilon = opts.epsilon;
    cfg.advantage_std_floor = opts.std_floor;
    cfg.validate();

    const auto lines = read_lines(opts.groups);
    std::string text;
    bool failed = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (blank(lines[i])) continue;
      ojson record;
      try {
        record = ojson::parse(lines[i]);
        const auto r_main = record.at("r_main").get<std::vector<double>>();
        const auto r_aux = record.at("r_aux").get<std::vector<double>>();
        cfg.group_size = std::max<std::size_t>(2, r_main.size());
        const GroupRewardBundle b = score_group(r_main, r_aux, cfg, opts.mode);
        record["fused"] = b.fused;
        record["advantages"] = b.advantages;
        record["used_fusion"] = b.used_fusion;
      } catch (const std::exception& e) {
        record = ojson{{"line", i + 1}, {"error", e.what()}};
        err << location(opts.groups, i + 1) << ": " << e.what() << "\n";
        failed = true;
      }
      text += record.dump() + "\n";
    }
    if (opts.out.empty()) {
      out << text;
    } else {
      write_text(opts.out, text);
    }
    return failed ? 1 : 0;
  } catch (const std::exception& e) {
    err << "reward: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace tempora::cli
