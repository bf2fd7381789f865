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

#include "tempora/parsers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "tempora/error.hpp"

namespace tempora {
namespace {

Event ev(std::string label, double on, double off) { return Event{std::move(label), {on, off}}; }

ParseErrorKind kind_of(const ParseResult& r) {
  EXPECT_FALSE(r.ok());
  return r.ok() ? ParseErrorKind::BadSyntax : r.error().kind;
}

TEST(ParseAg, Examples) {
  const auto r = parse_ag(R"({"a railroad crossing rings": [2.5, 7.1]})");
  ASSERT_TRUE(r.ok()) << r.error().message();
  ASSERT_EQ(r.value().events.size(), 1u);
  EXPECT_EQ(r.value().events[0], ev("a railroad crossing rings", 2.5, 7.1));
  EXPECT_EQ(r.value().task, TaskKind::AudioGrounding);

  const auto empty = parse_ag("{}");
  ASSERT_TRUE(empty.ok());
  EXPECT_TRUE(empty.value().events.empty());

  EXPECT_EQ(kind_of(parse_ag(R"({"x": [3.0]})")), ParseErrorKind::BadSyntax);
}

TEST(ParseAg, Errors) {
  EXPECT_EQ(kind_of(parse_ag("")), ParseErrorKind::EmptyOutput);
  EXPECT_EQ(kind_of(parse_ag(" \n\t")), ParseErrorKind::EmptyOutput);
  EXPECT_EQ(kind_of(parse_ag(R"(["x", [1, 2]])")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": [1, 2, 3]})")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": ["1", 2]})")), ParseErrorKind::BadTimestamp);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": [-1, 2]})")), ParseErrorKind::BadTimestamp);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": [1e999, 2]})")), ParseErrorKind::BadTimestamp);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": [3, 2]})")), ParseErrorKind::SwappedBounds);
  EXPECT_EQ(kind_of(parse_ag(R"({"  ": [1, 2]})")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": [[1, 2]]})")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": [1, 2]} trailing)")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_ag(R"({"x": [1,2],})")), ParseErrorKind::BadSyntax);
  // No locale-dependent decimal comma.
  EXPECT_FALSE(parse_ag(R"({"x": [1,5, 2]})").ok());
}

TEST(ParseAg, LenientRepairsSwap) {
  const auto r = parse_ag(R"({"x": [3, 2]})", ParseOptions{.lenient = true});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().events[0], ev("x", 2, 3));
  EXPECT_FALSE(r.value().warnings.empty());
}

TEST(ParseAg, WhitespaceWarnsAndEscapesDecode) {
  const auto r = parse_ag("  {\"say \\\"hi\\\" \\u00e9\": [0, 1.25]}\n");
  ASSERT_TRUE(r.ok()) << r.error().message();
  EXPECT_EQ(r.value().events[0].label, "say \"hi\" \xc3\xa9");
  EXPECT_EQ(r.value().warnings.size(), 1u);
}

TEST(ParseSed, Examples) {
  const auto two = parse_sed(R"({"Dog": [0.4, 1.2], "Speech": [3.0, 8.5]})");
  ASSERT_TRUE(two.ok());
  EXPECT_EQ(two.value().events, (std::vector<Event>{ev("Dog", 0.4, 1.2), ev("Speech", 3.0, 8.5)}));

  const auto nested = parse_sed(R"({"Dog": [[0.4,1.2],[5.0,6.0]]})");
  ASSERT_TRUE(nested.ok());
  EXPECT_EQ(nested.value().events, (std::vector<Event>{ev("Dog", 0.4, 1.2), ev("Dog", 5.0, 6.0)}));

  EXPECT_EQ(kind_of(parse_sed("Dog from 0.4 to 1.2")), ParseErrorKind::BadSyntax);
}

TEST(ParseSed, RepeatedKeysKept) {
  const auto r = parse_sed(R"({"Dog": [0, 1], "Cat": [2, 3], "Dog": [4, 5]})");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.value().events.size(), 3u);
  EXPECT_EQ(r.value().events[2], ev("Dog", 4, 5));
  EXPECT_EQ(kind_of(parse_sed(R"({"Dog": [[0, 1], [2]]})")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_sed(R"({"Dog": [[2, 1]]})")), ParseErrorKind::SwappedBounds);
}

TEST(ParseDac, Examples) {
  const auto r = parse_dac("0.00-2.52, a train horn honking\n3.10-7.90, birds chirping");
  ASSERT_TRUE(r.ok()) << r.error().message();
  EXPECT_EQ(r.value().events, (std::vector<Event>{ev("a train horn honking", 0.0, 2.52),
                                                  ev("birds chirping", 3.1, 7.9)}));
  EXPECT_EQ(kind_of(parse_dac("")), ParseErrorKind::EmptyOutput);
  EXPECT_EQ(kind_of(parse_dac("2.0-1.0, x")), ParseErrorKind::SwappedBounds);
}

TEST(ParseDac, LineGrammar) {
  const auto r = parse_dac("  1.5 - 2.125 ,  dog, then cat \n\n4.0-5.0,x\r\n");
  ASSERT_TRUE(r.ok()) << r.error().message();
  EXPECT_EQ(r.value().events, (std::vector<Event>{ev("dog, then cat", 1.5, 2.125), ev("x", 4, 5)}));

  EXPECT_EQ(kind_of(parse_dac("1-2, x")), ParseErrorKind::BadTimestamp);       // no decimals
  EXPECT_EQ(kind_of(parse_dac("1.0-2.0000, x")), ParseErrorKind::BadTimestamp);  // four decimals
  EXPECT_EQ(kind_of(parse_dac("1.0 2.0, x")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_dac("1.0-2.0 x")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_dac("1.0-2.0, ")), ParseErrorKind::BadSyntax);
  EXPECT_EQ(kind_of(parse_dac("-1.0-2.0, x")), ParseErrorKind::BadTimestamp);
}

TEST(ParseDac, ErrorReportsLine) {
  const std::string text = "0.0-1.0, ok\n1.0-2.0, fine\nnonsense here";
  const auto r = parse_dac(text);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().kind, ParseErrorKind::BadSyntax);
  EXPECT_EQ(r.error().line, 3u);
  EXPECT_GE(r.error().position, text.find("nonsense"));
  EXPECT_NE(r.error().message().find("line 3"), std::string::npos) << r.error().message();
}

TEST(ParseOutput, Dispatches) {
  EXPECT_TRUE(parse_output(TaskKind::DenseAudioCaptioning, "0.0-1.0, x").ok());
  EXPECT_EQ(parse_output(TaskKind::SoundEventDetection, "{}").value().task,
            TaskKind::SoundEventDetection);
}

// Arbitrary bytes: never throws, and error positions stay inside the input.
TEST(Parsers, NeverThrowOnGarbage) {
  std::mt19937_64 gen(99);
  const std::string alphabet = "{}[]\",:-.0123456789eE+ \n\t\\uabcXYZ\x01\xff";
  std::uniform_int_distribution<std::size_t> len(0, 40), pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    const std::size_t n = len(gen);
    for (std::size_t k = 0; k < n; ++k) {
      s += (i % 3 == 0) ? static_cast<char>(byte(gen)) : alphabet[pick(gen)];
    }
    for (auto task : {TaskKind::AudioGrounding, TaskKind::SoundEventDetection,
                      TaskKind::DenseAudioCaptioning}) {
      ParseResult r = ParsedOutput{};
      ASSERT_NO_THROW(r = parse_output(task, s));
      if (!r.ok()) {
        EXPECT_LE(r.error().position, s.size());
      }
    }
  }
}

// Label generator for the round-trip properties.
std::string random_label(std::mt19937_64& gen, bool json) {
  static const std::vector<std::string> words{"dog", "Speech", "a", "train", "horn", "honking",
                                              "caf\xc3\xa9", "x-ray", "1,2", "don't"};
  static const std::vector<std::string> json_only{"\"q\"", "back\\slash", "tab\there", "{}"};
  std::uniform_int_distribution<int> nwords(1, 4), coin(0, 9);
  std::string s;
  const int n = nwords(gen);
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    if (json && coin(gen) == 0) {
      s += json_only[gen() % json_only.size()];
    } else {
      s += words[gen() % words.size()];
    }
  }
  return s;
}

std::vector<Event> random_events(std::mt19937_64& gen, bool json, std::size_t min_events) {
  std::uniform_int_distribution<std::size_t> count(min_events, 6);
  std::uniform_real_distribution<double> t(0.0, 30.0);
  std::vector<Event> events;
  const std::size_t n = count(gen);
  for (std::size_t i = 0; i < n; ++i) {
    double a = t(gen), b = t(gen);
    if (i % 4 == 0) a = std::round(a * 100) / 100;  // some two-decimal values
    if (a > b) std::swap(a, b);
    events.push_back(ev(random_label(gen, json), a, b));
  }
  // Reuse labels so SED grouping gets exercised.
  if (n > 2) events[n - 1].label = events[0].label;
  return events;
}

double at_3dp(double x) { return std::round(x * 1000.0) / 1000.0; }

TEST(RoundTrip, AgAndSedExact) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 1000; ++i) {
    const auto events = random_events(gen, true, 0);
    const auto ag = parse_ag(serialize_ag(events));
    ASSERT_TRUE(ag.ok()) << serialize_ag(events);
    EXPECT_EQ(ag.value().events, events);

    const auto sed = parse_sed(serialize_sed(events));
    ASSERT_TRUE(sed.ok()) << serialize_sed(events);
    EXPECT_EQ(sed.value().events, canonical_order(TaskKind::SoundEventDetection, events));
  }
}

TEST(RoundTrip, DacAtEmittedPrecision) {
  std::mt19937_64 gen(6);
  for (int i = 0; i < 1000; ++i) {
    const auto events = random_events(gen, false, 1);
    const std::string text = serialize_dac(events);
    const auto r = parse_dac(text);
    ASSERT_TRUE(r.ok()) << text << "\n" << r.error().message();
    ASSERT_EQ(r.value().events.size(), events.size());
    for (std::size_t k = 0; k < events.size(); ++k) {
      EXPECT_EQ(r.value().events[k].label, events[k].label);
      EXPECT_NEAR(r.value().events[k].interval.onset, at_3dp(events[k].interval.onset), 1e-9);
      EXPECT_NEAR(r.value().events[k].interval.offset, at_3dp(events[k].interval.offset), 1e-9);
    }
    // Reserializing the parsed list is a fixed point.
    EXPECT_EQ(serialize_dac(r.value().events), text);
  }
}

TEST(Serialize, Formats) {
  const std::vector<Event> events{ev("Dog", 0.4, 1.2), ev("Cat", 2, 3), ev("Dog", 5, 6)};
  EXPECT_EQ(serialize_ag({ev("q", 2.5, 7.1)}), R"({"q": [2.5, 7.1]})");
  EXPECT_EQ(serialize_sed(events), R"({"Dog": [[0.4, 1.2], [5, 6]], "Cat": [2, 3]})");
  EXPECT_EQ(serialize_dac({ev("a b", 0, 2.52)}), "0.00-2.52, a b");
  EXPECT_EQ(format_dac_time(1.125), "1.125");
  EXPECT_EQ(format_dac_time(3.1), "3.10");
  EXPECT_THROW(serialize_dac({ev("two\nlines", 0, 1)}), Error);
}

}  // namespace
}  // namespace tempora
