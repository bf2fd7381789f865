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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tempora/embedding.hpp"
#include "tempora/error.hpp"
#include "tempora/metrics.hpp"
#include "tempora/parsers.hpp"
#include "tempora/prompt.hpp"
#include "tempora/reward.hpp"
#include "tempora/toy_rl.hpp"

namespace py = pybind11;
using namespace tempora;

namespace {

py::object from_json(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

py::dict report_dict(const MetricReport& r) { return from_json(r.to_json()); }

EventList event_list(std::vector<Event> events, std::string clip_id, double duration) {
  return EventList{std::move(clip_id), duration, std::move(events)};
}

py::list items_list(const PromptSequence& seq) {
  py::list out;
  for (const auto& item : seq.items) {
    if (const auto* f = std::get_if<AudioFrame>(&item)) {
      out.append(py::make_tuple("audio", f->index));
    } else if (const auto* t = std::get_if<TimestampToken>(&item)) {
      out.append(py::make_tuple("timestamp", t->surface, t->time));
    } else {
      out.append(py::make_tuple("text", std::get<TextToken>(item).text));
    }
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Timestamp prompting, output parsing, temporal metrics and adaptive rewards.";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::enum_<TaskKind>(m, "TaskKind")
      .value("AG", TaskKind::AudioGrounding)
      .value("SED", TaskKind::SoundEventDetection)
      .value("DAC", TaskKind::DenseAudioCaptioning);
  py::enum_<RewardMode>(m, "RewardMode")
      .value("ADAPTIVE", RewardMode::Adaptive)
      .value("MAIN_ONLY", RewardMode::MainOnly);
  py::enum_<Averaging>(m, "Averaging").value("MICRO", Averaging::Micro).value("CLASS_MACRO", Averaging::ClassMacro);
  py::enum_<LabelMode>(m, "LabelMode")
      .value("EXACT", LabelMode::Exact)
      .value("CAPTION_SIMILARITY", LabelMode::CaptionSimilarity);
  py::enum_<OffsetMode>(m, "OffsetMode")
      .value("FIXED_COLLAR", OffsetMode::FixedCollar)
      .value("COLLAR_OR_FRACTION", OffsetMode::CollarOrFraction);

  // Core types ---------------------------------------------------------------
  py::class_<TimeInterval>(m, "TimeInterval")
      .def(py::init(&TimeInterval::make), py::arg("onset"), py::arg("offset"))
      .def_readonly("onset", &TimeInterval::onset)
      .def_readonly("offset", &TimeInterval::offset)
      .def("length", &TimeInterval::length)
      .def("__eq__", [](const TimeInterval& a, const TimeInterval& b) { return a == b; })
      .def("__repr__", [](const TimeInterval& t) {
        return "TimeInterval(" + std::to_string(t.onset) + ", " + std::to_string(t.offset) + ")";
      });
  py::class_<Event>(m, "Event")
      .def(py::init([](std::string label, double onset, double offset) {
             return Event{std::move(label), TimeInterval::make(onset, offset)};
           }),
           py::arg("label"), py::arg("onset"), py::arg("offset"))
      .def_readonly("label", &Event::label)
      .def_property_readonly("onset", [](const Event& e) { return e.interval.onset; })
      .def_property_readonly("offset", [](const Event& e) { return e.interval.offset; })
      .def_readonly("interval", &Event::interval)
      .def("__eq__", [](const Event& a, const Event& b) { return a == b; })
      .def("__repr__", [](const Event& e) {
        return "Event(" + py::repr(py::str(e.label)).cast<std::string>() + ", " +
               std::to_string(e.interval.onset) + ", " + std::to_string(e.interval.offset) + ")";
      });

  m.def("intersect", &intersect, py::arg("a"), py::arg("b"));
  m.def("union_length", &union_length, py::arg("a"), py::arg("b"));
  m.def("iou", &iou, py::arg("pred"), py::arg("gt"));
  m.def("normalize_label", &normalize_label, py::arg("label"));

  // Prompt -------------------------------------------------------------------
  py::class_<PromptSequence>(m, "PromptSequence")
      .def_readonly("duration", &PromptSequence::duration)
      .def_readonly("frame_rate", &PromptSequence::frame_rate)
      .def_property_readonly("audio_frame_count", &PromptSequence::audio_frame_count)
      .def_property_readonly("timestamp_count", &PromptSequence::timestamp_count)
      .def_property_readonly("items", &items_list);
  m.def("build_time_prompt", &build_time_prompt, py::arg("duration"), py::arg("frame_rate") = kFrameRateHz,
        py::arg("stride") = kTimestampStride, py::arg("max_time") = kMaxTime);
  m.def("render_prompt", &render_prompt, py::arg("seq"), py::arg("question"));
  m.def(
      "timestamp_vocab",
      [](double stride, double max_time) {
        std::vector<std::string> out;
        for (const auto& t : TimestampVocab(stride, max_time).tokens()) out.push_back(t.surface);
        return out;
      },
      py::arg("stride") = kTimestampStride, py::arg("max_time") = kMaxTime);

  // Embeddings ---------------------------------------------------------------
  py::class_<EmbeddingTable>(m, "EmbeddingTable")
      .def(py::init<std::size_t>(), py::arg("dim"))
      .def_property_readonly("dim", &EmbeddingTable::dim)
      .def("__len__", &EmbeddingTable::size)
      .def("append",
           [](EmbeddingTable& t, std::string name, const std::vector<float>& values, bool frozen) {
             t.append(std::move(name), values, frozen);
           },
           py::arg("name"), py::arg("values"), py::arg("frozen") = false)
      .def("row", [](const EmbeddingTable& t, std::size_t i) {
        const auto r = t.row(i);
        return std::vector<float>(r.begin(), r.end());
      })
      .def("name", &EmbeddingTable::name)
      .def("frozen", &EmbeddingTable::frozen)
      .def_property_readonly("names", &EmbeddingTable::names);
  py::class_<ReferenceTokenizer>(m, "ReferenceTokenizer")
      .def(py::init<std::map<std::string, TokenId>, std::map<std::string, std::vector<TokenId>>>(),
           py::arg("pieces"), py::arg("overrides") = std::map<std::string, std::vector<TokenId>>{})
      .def_static("from_json", &ReferenceTokenizer::from_json_text, py::arg("text"))
      .def("__call__", [](const ReferenceTokenizer& t, std::string_view s) { return t(s); });
  m.def(
      "semantic_init",
      [](std::string_view text, py::object tokenizer, const EmbeddingTable& base) {
        if (py::isinstance<ReferenceTokenizer>(tokenizer)) {
          return semantic_init(text, tokenizer.cast<const ReferenceTokenizer&>(), base);
        }
        return semantic_init(text, tokenizer.cast<TokenizeFn>(), base);
      },
      py::arg("text"), py::arg("tokenizer"), py::arg("base"));
  m.def(
      "build_timestamp_embeddings",
      [](const ReferenceTokenizer& tok, const EmbeddingTable& base, double stride, double max_time) {
        return build_timestamp_embeddings(TimestampVocab(stride, max_time), tok, base);
      },
      py::arg("tokenizer"), py::arg("base"), py::arg("stride") = kTimestampStride,
      py::arg("max_time") = kMaxTime);
  m.def("save_table", [](const EmbeddingTable& t, const std::string& path) { save_table(t, path); },
        py::arg("table"), py::arg("path"));
  m.def("load_table", [](const std::string& path) { return load_table(path); }, py::arg("path"));

  // Parsers ------------------------------------------------------------------
  py::class_<ParseError>(m, "ParseError")
      .def_property_readonly("kind", [](const ParseError& e) { return std::string(to_string(e.kind)); })
      .def_readonly("position", &ParseError::position)
      .def_readonly("line", &ParseError::line)
      .def_readonly("detail", &ParseError::detail)
      .def("__str__", &ParseError::message);
  py::class_<ParseResult>(m, "ParseResult")
      .def_property_readonly("ok", &ParseResult::ok)
      .def("__bool__", &ParseResult::ok)
      .def_property_readonly("events",
                             [](const ParseResult& r) { return r.ok() ? r.value().events : std::vector<Event>{}; })
      .def_property_readonly("warnings", [](const ParseResult& r) {
        return r.ok() ? r.value().warnings : std::vector<std::string>{};
      })
      .def_property_readonly("error", [](const ParseResult& r) -> std::optional<ParseError> {
        if (r.ok()) return std::nullopt;
        return r.error();
      });
  m.def(
      "parse_output",
      [](TaskKind task, std::string_view text, bool lenient) { return parse_output(task, text, {lenient}); },
      py::arg("task"), py::arg("text"), py::arg("lenient") = false);
  m.def("serialize_output", &serialize_output, py::arg("task"), py::arg("events"));

  // Metrics ------------------------------------------------------------------
  py::class_<MatchConfig>(m, "MatchConfig")
      .def(py::init<>())
      .def_static("for_task", &MatchConfig::for_task)
      .def_readwrite("collar", &MatchConfig::collar)
      .def_readwrite("offset_mode", &MatchConfig::offset_mode)
      .def_readwrite("offset_fraction", &MatchConfig::offset_fraction)
      .def_readwrite("label_mode", &MatchConfig::label_mode)
      .def_readwrite("caption_sim_threshold", &MatchConfig::caption_sim_threshold)
      .def_readwrite("empty_is_perfect", &MatchConfig::empty_is_perfect);
  m.def(
      "eb_f1",
      [](const std::vector<Event>& preds, const std::vector<Event>& refs, const MatchConfig& cfg) {
        return report_dict(eb_f1(event_list(preds, "clip", 0.0), event_list(refs, "clip", 0.0), cfg));
      },
      py::arg("preds"), py::arg("refs"), py::arg("config") = MatchConfig{});
  m.def(
      "dac_metrics",
      [](const std::vector<Event>& preds, const std::vector<Event>& refs, const MatchConfig& cfg) {
        return report_dict(dac_metrics(event_list(preds, "clip", 0.0), event_list(refs, "clip", 0.0), cfg));
      },
      py::arg("preds"), py::arg("refs"), py::arg("config") = MatchConfig::for_task(TaskKind::DenseAudioCaptioning));
  m.def(
      "grounding_metrics",
      [](const std::vector<std::optional<TimeInterval>>& preds, const std::vector<TimeInterval>& gts,
         const std::vector<double>& thresholds) {
        if (preds.size() != gts.size()) throw Error(Errc::kLengthMismatch, "preds and gts differ in length");
        std::vector<GroundingPair> pairs;
        for (std::size_t i = 0; i < preds.size(); ++i) pairs.push_back({preds[i], gts[i]});
        return report_dict(grounding_metrics(pairs, thresholds));
      },
      py::arg("preds"), py::arg("gts"), py::arg("thresholds") = kDefaultRecallThresholds);
  m.def("meteor_lite", &meteor_lite, py::arg("candidate"), py::arg("reference"));

  // Rewards ------------------------------------------------------------------
  m.def(
      "adaptive_reward",
      [](const std::vector<double>& r_main, const std::vector<double>& r_aux, double epsilon) {
        const auto r = adaptive_reward(r_main, r_aux, epsilon);
        return py::make_tuple(r.fused, r.used_fusion);
      },
      py::arg("r_main"), py::arg("r_aux"), py::arg("epsilon") = kDefaultEpsilon);
  m.def(
      "grpo_advantages",
      [](const std::vector<double>& fused, double std_floor) { return grpo_advantages(fused, std_floor); },
      py::arg("fused"), py::arg("std_floor") = kDefaultAdvantageStdFloor);
  m.def(
      "sample_reward",
      [](TaskKind task, std::string_view text, const std::vector<Event>& refs, double duration) {
        const auto r = sample_reward(task, text, event_list(refs, "clip", duration), MatchConfig::for_task(task));
        return py::make_tuple(r.main, r.aux);
      },
      py::arg("task"), py::arg("text"), py::arg("refs"), py::arg("duration"));

  // Toy RL -------------------------------------------------------------------
  py::class_<EnvConfig>(m, "EnvConfig")
      .def(py::init<>())
      .def_readwrite("clip_duration", &EnvConfig::clip_duration)
      .def_readwrite("frame_rate", &EnvConfig::frame_rate)
      .def_readwrite("n_events_min", &EnvConfig::n_events_min)
      .def_readwrite("n_events_max", &EnvConfig::n_events_max)
      .def_readwrite("min_event_len", &EnvConfig::min_event_len)
      .def_readwrite("max_event_len", &EnvConfig::max_event_len)
      .def_readwrite("saliency_snr", &EnvConfig::saliency_snr)
      .def_readwrite("noise_std", &EnvConfig::noise_std)
      .def_readwrite("seed", &EnvConfig::seed);
  py::class_<RewardConfig>(m, "RewardConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &RewardConfig::epsilon)
      .def_readwrite("group_size", &RewardConfig::group_size)
      .def_readwrite("advantage_std_floor", &RewardConfig::advantage_std_floor);
  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("iterations", &TrainConfig::iterations)
      .def_readwrite("lr", &TrainConfig::lr)
      .def_readwrite("mode", &TrainConfig::mode)
      .def_readwrite("collar", &TrainConfig::collar)
      .def_readwrite("eval_clips", &TrainConfig::eval_clips);
  m.def(
      "train",
      [](const EnvConfig& env, const RewardConfig& reward, const TrainConfig& tc) {
        TrainReport report;
        {
          py::gil_scoped_release release;
          report = train(PolicyParams::initial(), env, reward, tc);
        }
        return from_json(report.to_json());
      },
      py::arg("env") = EnvConfig{}, py::arg("reward") = RewardConfig{}, py::arg("train") = TrainConfig{});
}
