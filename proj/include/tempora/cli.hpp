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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempora/metrics.hpp"
#include "tempora/prompt.hpp"
#include "tempora/reward.hpp"
#include "tempora/toy_rl.hpp"
#include "tempora/types.hpp"

// Command implementations behind the tempora executable. Each returns the
// process exit code and writes diagnostics to err; none of them throw.
namespace tempora::cli {

struct EvalOptions {
  TaskKind task = TaskKind::AudioGrounding;
  std::filesystem::path predictions;
  std::filesystem::path references;
  std::filesystem::path out;  // empty: print to stdout
  double collar = kDefaultCollar;
  double sim_threshold = 0.5;
  std::vector<double> thresholds = kDefaultRecallThresholds;
  Averaging averaging = Averaging::Micro;
};

int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);

struct PromptOptions {
  double duration = 0.0;
  double frame_rate = kFrameRateHz;
  double stride = kTimestampStride;
  double max_time = kMaxTime;
  std::string question;
  std::string format = "text";  // text | json
};

int cmd_prompt(const PromptOptions& opts, std::ostream& out, std::ostream& err);

struct EmbedInitOptions {
  std::filesystem::path base;
  std::filesystem::path base_names;  // empty: base + ".names"
  std::filesystem::path tokenizer;
  std::filesystem::path out;
  double stride = kTimestampStride;
  double max_time = kMaxTime;
};

int cmd_embed_init(const EmbedInitOptions& opts, std::ostream& out, std::ostream& err);

/// Settings read from a train-toy config file.
struct ToyConfig {
  EnvConfig env;
  RewardConfig reward;
  TrainConfig train;
};

/// Flat "key = value" lines; '#' starts a comment. Keys: the EnvConfig
/// fields, epsilon, group_size, advantage_std_floor, iterations, lr, collar,
/// eval_clips. Unknown, duplicated or ill-typed keys throw Error(kConfig)
/// naming the key.
ToyConfig parse_toy_config(std::string_view text);

struct TrainToyOptions {
  std::filesystem::path config;  // empty: all defaults
  RewardMode mode = RewardMode::Adaptive;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
  std::filesystem::path csv;     // empty: out with a .csv extension
};

int cmd_train_toy(const TrainToyOptions& opts, std::ostream& out, std::ostream& err);

struct RewardOptions {
  std::filesystem::path groups;
  std::filesystem::path out;  // empty: stdout
  double epsilon = kDefaultEpsilon;
  double std_floor = kDefaultAdvantageStdFloor;
  RewardMode mode = RewardMode::Adaptive;
};

int cmd_reward(const RewardOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace tempora::cli
