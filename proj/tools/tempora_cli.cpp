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

#include <cctype>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "tempora/cli.hpp"

int main(int argc, char** argv) {
  using namespace tempora;

  CLI::App app{"tempora: timestamp prompts, temporal metrics and adaptive-reward RL"};
  app.require_subcommand(1);

  const std::map<std::string, TaskKind> tasks{{"ag", TaskKind::AudioGrounding},
                                              {"sed", TaskKind::SoundEventDetection},
                                              {"dac", TaskKind::DenseAudioCaptioning}};
  const std::map<std::string, RewardMode> modes{{"adaptive", RewardMode::Adaptive},
                                                {"main_only", RewardMode::MainOnly}};
  const std::map<std::string, Averaging> averagings{{"micro", Averaging::Micro},
                                                    {"macro", Averaging::ClassMacro}};

  cli::EvalOptions eval;
  std::string pred_path, ref_path, eval_out;
  auto* eval_cmd = app.add_subcommand("eval", "Score a JSONL prediction file against JSONL references");
  std::string task_name, averaging_name = "micro", toy_mode = "adaptive", reward_mode = "adaptive";
  eval_cmd->add_option("--task", task_name, "ag | sed | dac")
      ->required()
      ->check(CLI::IsMember(tasks, CLI::ignore_case));
  eval_cmd->add_option("--pred", pred_path, "Predictions: {\"id\", \"raw_output\"} per line")->required();
  eval_cmd->add_option("--ref", ref_path, "References: {\"id\", \"duration\", \"events\"} per line")->required();
  eval_cmd->add_option("--collar", eval.collar, "Boundary tolerance in seconds")->capture_default_str();
  eval_cmd->add_option("--sim-threshold", eval.sim_threshold, "DAC caption similarity threshold")
      ->capture_default_str();
  eval_cmd->add_option("--thresholds", eval.thresholds, "IoU recall thresholds (AG)")->delimiter(',');
  eval_cmd->add_option("--averaging", averaging_name, "micro | macro")
      ->check(CLI::IsMember(averagings, CLI::ignore_case))
      ->capture_default_str();
  eval_cmd->add_option("--out", eval_out, "Report path (default: stdout)");

  cli::PromptOptions prompt;
  auto* prompt_cmd = app.add_subcommand("prompt", "Build and render a timestamp-interleaved prompt");
  prompt_cmd->add_option("--duration", prompt.duration, "Clip duration in seconds")->required();
  prompt_cmd->add_option("--frame-rate", prompt.frame_rate, "Encoder frame rate in Hz")->capture_default_str();
  prompt_cmd->add_option("--stride", prompt.stride, "Timestamp stride in seconds")->capture_default_str();
  prompt_cmd->add_option("--max-time", prompt.max_time, "Longest supported clip")->capture_default_str();
  prompt_cmd->add_option("--question", prompt.question, "Text appended after </audio>");
  prompt_cmd->add_option("--format", prompt.format, "text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  cli::EmbedInitOptions embed;
  std::string base_path, base_names, tok_path, embed_out;
  auto* embed_cmd = app.add_subcommand("embed-init", "Append semantically initialized timestamp rows to a TPEB table");
  embed_cmd->add_option("--base", base_path, "Base TPEB table")->required();
  embed_cmd->add_option("--base-names", base_names, "Names sidecar (default: <base>.names)");
  embed_cmd->add_option("--tokenizer", tok_path, "Tokenizer spec JSON")->required();
  embed_cmd->add_option("--stride", embed.stride, "Timestamp stride in seconds")->capture_default_str();
  embed_cmd->add_option("--max-time", embed.max_time, "Last timestamp in seconds")->capture_default_str();
  embed_cmd->add_option("--out", embed_out, "Output TPEB path (names go to <out>.names)")->required();

  cli::TrainToyOptions toy;
  std::string cfg_path, toy_out, csv_out;
  std::uint64_t seed = 0;
  auto* toy_cmd = app.add_subcommand("train-toy", "Train the toy grounding policy");
  toy_cmd->add_option("--config", cfg_path, "key = value config file");
  toy_cmd->add_option("--mode", toy_mode, "adaptive | main_only")
      ->check(CLI::IsMember(modes, CLI::ignore_case))
      ->capture_default_str();
  auto* seed_opt = toy_cmd->add_option("--seed", seed, "Overrides the config seed");
  toy_cmd->add_option("--out", toy_out, "JSON report path")->required();
  toy_cmd->add_option("--csv", csv_out, "Curve CSV path (default: <out>.csv)");

  cli::RewardOptions reward;
  std::string groups_path, reward_out;
  auto* reward_cmd = app.add_subcommand("reward", "Annotate reward groups with fused rewards and advantages");
  reward_cmd->add_option("--groups", groups_path, "JSONL with r_main and r_aux arrays")->required();
  reward_cmd->add_option("--epsilon", reward.epsilon, "Variance threshold")->capture_default_str();
  reward_cmd->add_option("--std-floor", reward.std_floor, "Advantage std floor")->capture_default_str();
  reward_cmd->add_option("--mode", reward_mode, "adaptive | main_only")
      ->check(CLI::IsMember(modes, CLI::ignore_case))
      ->capture_default_str();
  reward_cmd->add_option("--out", reward_out, "Output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  if (*eval_cmd) {
    eval.task = tasks.at(lower(task_name));
    eval.averaging = averagings.at(lower(averaging_name));
    eval.predictions = pred_path;
    eval.references = ref_path;
    eval.out = eval_out;
    return cli::cmd_eval(eval, std::cout, std::cerr);
  }
  if (*prompt_cmd) return cli::cmd_prompt(prompt, std::cout, std::cerr);
  if (*embed_cmd) {
    embed.base = base_path;
    embed.base_names = base_names;
    embed.tokenizer = tok_path;
    embed.out = embed_out;
    return cli::cmd_embed_init(embed, std::cout, std::cerr);
  }
  if (*toy_cmd) {
    toy.mode = modes.at(lower(toy_mode));
    toy.config = cfg_path;
    toy.out = toy_out;
    toy.csv = csv_out;
    if (*seed_opt) toy.seed = seed;
    return cli::cmd_train_toy(toy, std::cout, std::cerr);
  }
  if (*reward_cmd) {
    reward.mode = modes.at(lower(reward_mode));
    reward.groups = groups_path;
    reward.out = reward_out;
    return cli::cmd_reward(reward, std::cout, std::cerr);
  }
  return 1;
}
