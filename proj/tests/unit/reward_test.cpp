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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "tempora/error.hpp"

namespace tempora {
namespace {

using Vec = std::vector<double>;

std::vector<std::size_t> argsort(const Vec& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  return idx;
}

void expect_near(const Vec& got, const Vec& want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

TEST(AdaptiveReward, Examples) {
  auto a = adaptive_reward(Vec{0.5, 0.5, 0.5, 0.5}, Vec{0.2, 0.4, 0.6, 0.8});
  EXPECT_TRUE(a.used_fusion);
  expect_near(a.fused, {0.1, 0.2, 0.3, 0.4}, 1e-15);

  auto b = adaptive_reward(Vec{1, 0, 1, 0}, Vec{0.3, 0.9, 0.1, 0.5});
  EXPECT_FALSE(b.used_fusion);
  EXPECT_EQ(b.fused, (Vec{1, 0, 1, 0}));

  auto c = adaptive_reward(Vec{0, 0, 0, 0}, Vec{0.2, 0.4, 0.6, 0.8});
  EXPECT_TRUE(c.used_fusion);
  EXPECT_EQ(c.fused, (Vec{0, 0, 0, 0}));
}

TEST(AdaptiveReward, EpsilonBoundary) {
  // Var of {0, 2e-3} is exactly 1e-6: not below epsilon.
  EXPECT_FALSE(adaptive_reward(Vec{0.0, 2e-3}, Vec{1, 1}, 1e-6 * (1 - 1e-12)).used_fusion);
  EXPECT_TRUE(adaptive_reward(Vec{0.0, 1e-3}, Vec{1, 1}, 1e-6).used_fusion);
}

TEST(AdaptiveReward, Errors) {
  EXPECT_THROW(adaptive_reward(Vec{1, 0}, Vec{1, 0, 1}), Error);
  EXPECT_THROW(adaptive_reward(Vec{1}, Vec{1}), Error);
  EXPECT_THROW(adaptive_reward(Vec{1, std::nan("")}, Vec{1, 0}), Error);
  EXPECT_THROW(adaptive_reward(Vec{1, 0}, Vec{std::numeric_limits<double>::infinity(), 0}), Error);
}

TEST(AdaptiveReward, Properties) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    Vec main(4), aux(4);
    const int kind = trial % 3;
    const double c = u(gen);
    for (std::size_t i = 0; i < 4; ++i) {
      main[i] = kind == 0 ? c : kind == 1 ? static_cast<double>(gen() % 2) : u(gen);
      aux[i] = u(gen);
    }
    const auto r = adaptive_reward(main, aux);
    EXPECT_EQ(r.used_fusion, oracle::pop_std(main) * oracle::pop_std(main) < kDefaultEpsilon);
    for (std::size_t i = 0; i < 4; ++i) {
      EXPECT_GE(r.fused[i], 0.0);
      EXPECT_LE(r.fused[i], 1.0);
      if (r.used_fusion) {
        EXPECT_LE(r.fused[i], std::min(main[i], aux[i]));
      }
    }
    if (kind == 0 && c > 0) {
      // Constant nonzero main: ordering comes from aux alone.
      EXPECT_TRUE(r.used_fusion);
      EXPECT_EQ(argsort(r.fused), argsort(aux));
      const double va = oracle::pop_std(aux), vf = oracle::pop_std(r.fused);
      EXPECT_NEAR(vf * vf, c * c * va * va, 1e-12);
    }
  }
}

TEST(GrpoAdvantages, Examples) {
  expect_near(grpo_advantages(Vec{0.1, 0.2, 0.3, 0.4}), {-1.3416, -0.4472, 0.4472, 1.3416}, 1e-3);
  EXPECT_EQ(grpo_advantages(Vec{0.7, 0.7, 0.7}), (Vec{0, 0, 0}));
  expect_near(grpo_advantages(Vec{1, 0}), {1, -1}, 1e-12);
  EXPECT_THROW(grpo_advantages(Vec{1}), Error);
  EXPECT_THROW(grpo_advantages(Vec{1, std::nan("")}), Error);
}

TEST(GrpoAdvantages, NormalizedAndScaleFree) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    Vec r(2 + trial % 7);
    for (double& x : r) x = u(gen);
    const auto a = grpo_advantages(r);
    EXPECT_NEAR(std::accumulate(a.begin(), a.end(), 0.0), 0.0, 1e-9);
    EXPECT_NEAR(oracle::pop_std(a), 1.0, 1e-9);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_NEAR(a[i], (r[i] - oracle::mean(r)) / oracle::pop_std(r), 1e-9);
    }
    Vec scaled = r;
    for (double& x : scaled) x *= 3.7;
    EXPECT_EQ(argsort(grpo_advantages(scaled)), argsort(a));
  }
}

TEST(GrpoAdvantages, BelowFloorIsZero) {
  EXPECT_EQ(grpo_advantages(Vec{0.5, 0.5 + 1e-10}, 1e-8), (Vec{0, 0}));
  const auto a = grpo_advantages(Vec{0.5, 0.5 + 1e-6}, 1e-8);
  EXPECT_NEAR(a[0], -1.0, 1e-6);
}

TEST(SampleReward, Examples) {
  const EventList refs{"c", 10.0, {{"q", {5.0, 6.0}}}};
  const MatchConfig cfg;
  const auto exact = sample_reward(TaskKind::AudioGrounding, R"({"q": [5.0, 6.0]})", refs, cfg);
  EXPECT_EQ(exact.main, 1.0);
  EXPECT_EQ(exact.aux, 1.0);

  const auto near = sample_reward(TaskKind::AudioGrounding, R"({"q": [4.9, 5.9]})", refs, cfg);
  EXPECT_EQ(near.main, 1.0);
  EXPECT_NEAR(near.aux, 0.9 / 1.1, 1e-9);

  const auto bad = sample_reward(TaskKind::AudioGrounding, "at five seconds", refs, cfg);
  EXPECT_EQ(bad.main, 0.0);
  EXPECT_EQ(bad.aux, 0.0);
}

TEST(SampleReward, DacUsesMeteor) {
  const EventList refs{"c", 10.0, {{"dog barks", {1.0, 2.0}}}};
  const auto r = sample_reward(TaskKind::DenseAudioCaptioning, "1.00-2.00, dog barks", refs,
                               MatchConfig::for_task(TaskKind::DenseAudioCaptioning));
  EXPECT_EQ(r.main, 1.0);
  EXPECT_NEAR(r.aux, 0.9375, 1e-12);
}

TEST(ScoreGroup, ModesAndZeroAdvantage) {
  const RewardConfig cfg;
  const Vec main{1, 1, 1, 1}, aux{0.9, 0.5, 0.7, 0.8};
  const auto adaptive = score_group(main, aux, cfg, RewardMode::Adaptive);
  EXPECT_TRUE(adaptive.used_fusion);
  EXPECT_FALSE(adaptive.zero_advantage());

  const auto main_only = score_group(main, aux, cfg, RewardMode::MainOnly);
  EXPECT_FALSE(main_only.used_fusion);
  EXPECT_TRUE(main_only.zero_advantage());
  EXPECT_EQ(main_only.fused, main);

  const auto j = adaptive.to_json();
  EXPECT_EQ(j.begin().key(), "r_main");
  EXPECT_TRUE(j["used_fusion"].get<bool>());
}

TEST(RewardConfig, Validate) {
  RewardConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.epsilon = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = RewardConfig{};
  cfg.group_size = 1;
  EXPECT_THROW(cfg.validate(), Error);
  EXPECT_EQ(RewardConfig::for_task(TaskKind::DenseAudioCaptioning).aux_metric, MetricId::Meteor);
  EXPECT_EQ(RewardConfig::for_task(TaskKind::SoundEventDetection).aux_metric, MetricId::MIoU);
}

}  // namespace
}  // namespace tempora
