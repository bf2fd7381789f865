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

#include "tempora/types.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tempora/error.hpp"

namespace tempora {
namespace {

constexpr double kTol = 1e-9;

TimeInterval iv(double a, double b) { return TimeInterval{a, b}; }

TEST(Intersect, Examples) {
  EXPECT_NEAR(intersect(iv(5.0, 6.0), iv(4.9, 5.9)), 0.9, kTol);
  EXPECT_NEAR(intersect(iv(1.0, 2.0), iv(1.0, 2.0)), 1.0, kTol);
  EXPECT_EQ(intersect(iv(0.0, 1.0), iv(2.0, 3.0)), 0.0);
}

TEST(UnionLength, Examples) {
  EXPECT_NEAR(union_length(iv(5.0, 6.0), iv(4.9, 5.9)), 1.1, kTol);
  EXPECT_NEAR(union_length(iv(1.0, 2.0), iv(1.0, 2.0)), 1.0, kTol);
  EXPECT_NEAR(union_length(iv(0.0, 1.0), iv(2.0, 3.0)), 2.0, kTol);
}

TEST(IntervalProperties, RandomPairs) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int i = 0; i < 20000; ++i) {
    double a0 = u(gen), a1 = u(gen), b0 = u(gen), b1 = u(gen);
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    // Snap some endpoints together to hit touching/nested cases.
    if (i % 7 == 0) b0 = a1;
    if (i % 11 == 0) b1 = std::max(b0, a1);
    if (b0 > b1) std::swap(b0, b1);
    const auto a = iv(a0, a1), b = iv(b0, b1);
    const double in = intersect(a, b);
    EXPECT_GE(in, 0.0);
    EXPECT_LE(in, std::min(a.length(), b.length()) + kTol);
    EXPECT_GE(union_length(a, b), std::max(a.length(), b.length()) - kTol);
    EXPECT_EQ(in, intersect(b, a));
    EXPECT_EQ(union_length(a, b), union_length(b, a));
  }
}

TEST(TimeInterval, MakeRejectsInvalid) {
  EXPECT_NO_THROW(TimeInterval::make(1.0, 1.0));
  EXPECT_THROW(TimeInterval::make(2.0, 1.0), Error);
  EXPECT_THROW(TimeInterval::make(-0.1, 1.0), Error);
  EXPECT_THROW(TimeInterval::make(0.0, std::numeric_limits<double>::infinity()), Error);
  EXPECT_THROW(TimeInterval::make(std::nan(""), 1.0), Error);
  EXPECT_TRUE(iv(3.0, 3.0).valid());
  EXPECT_FALSE(iv(3.0, 2.0).valid());
}

TEST(EventList, Validate) {
  EventList ok{"c", 10.0, {{"dog", iv(0.0, 10.0)}, {"x", iv(4.0, 4.0)}}};
  EXPECT_NO_THROW(ok.validate());

  EventList past_end{"c", 10.0, {{"dog", iv(9.0, 10.5)}}};
  EXPECT_THROW(past_end.validate(), Error);

  EventList zero_duration{"c", 0.0, {}};
  EXPECT_THROW(zero_duration.validate(), Error);

  EventList blank_label{"c", 5.0, {{"  \t ", iv(0.0, 1.0)}}};
  EXPECT_THROW(blank_label.validate(), Error);
}

TEST(TaskKind, NamesRoundTrip) {
  for (auto t : {TaskKind::AudioGrounding, TaskKind::SoundEventDetection,
                 TaskKind::DenseAudioCaptioning}) {
    EXPECT_EQ(parse_task_kind(to_string(t)), t);
  }
  EXPECT_FALSE(parse_task_kind("asr").has_value());
}

TEST(NormalizeLabel, TrimsCollapsesAndFolds) {
  EXPECT_EQ(normalize_label("  Dog\t Barking \n"), "dog barking");
  EXPECT_EQ(normalize_label("Speech"), "speech");
  EXPECT_EQ(normalize_label("   "), "");
}

}  // namespace
}  // namespace tempora
