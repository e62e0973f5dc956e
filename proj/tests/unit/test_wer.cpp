// Copyright 2026 The asrprobe Authors
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

#include <gtest/gtest.h>

#include <random>

#include "core/error.hpp"
#include "metrics/text.hpp"
#include "metrics/wer.hpp"
#include "oracles/wer_bruteforce.hpp"

namespace asrprobe::metrics {
namespace {

using Words = std::vector<std::string>;

TEST(Normalize, UppercasesAndStripsPunctuation) {
  EXPECT_EQ(NormalizeText("Hello, world!"), (Words{"HELLO", "WORLD"}));
}

TEST(Normalize, KeepsInnerApostrophes) {
  EXPECT_EQ(NormalizeText("don't stop"), (Words{"DON'T", "STOP"}));
  EXPECT_EQ(NormalizeText("'quoted' words'"), (Words{"QUOTED", "WORDS"}));
}

TEST(Normalize, EmptyAndWhitespace) {
  EXPECT_TRUE(NormalizeText("").empty());
  EXPECT_TRUE(NormalizeText("  \t\n ").empty());
  EXPECT_TRUE(NormalizeText("...!?").empty());
}

TEST(Normalize, CollapsesWhitespaceRuns) {
  EXPECT_EQ(NormalizeText("  a\t\tb \n c "), (Words{"A", "B", "C"}));
}

TEST(Normalize, PunctuationInsideWordsIsDeleted) {
  EXPECT_EQ(NormalizeText("e-mail u.s.a"), (Words{"EMAIL", "USA"}));
}

TEST(Wer, Identity) {
  const auto w = Wer("HELLO WORLD", "HELLO WORLD");
  EXPECT_DOUBLE_EQ(w.wer, 0.0);
  EXPECT_EQ(w.substitutions + w.deletions + w.insertions, 0u);
}

TEST(Wer, SubstitutionAndDeletion) {
  const auto w = Wer("A B C D", "A X C");
  EXPECT_EQ(w.substitutions, 1u);
  EXPECT_EQ(w.deletions, 1u);
  EXPECT_EQ(w.insertions, 0u);
  EXPECT_DOUBLE_EQ(w.wer, 0.5);
}

TEST(Wer, SingleDeletion) {
  const auto w = Wer("A", "");
  EXPECT_EQ(w.deletions, 1u);
  EXPECT_DOUBLE_EQ(w.wer, 1.0);
}

TEST(Wer, InsertionsCanExceedOne) {
  const auto w = Wer("A", "B C D");
  EXPECT_DOUBLE_EQ(w.wer, 3.0);
}

TEST(Wer, EmptyReferenceIsUndefined) {
  for (const char* ref : {"", "   ", "?!"}) {
    try {
      Wer(ref, "A");
      FAIL() << ref;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kUndefinedWer);
    }
  }
}

TEST(Wer, NormalizationAppliesToBothSides) {
  EXPECT_DOUBLE_EQ(Wer("Hello, World!", "hello world").wer, 0.0);
}

TEST(Wer, TieBreakPrefersSubstitution) {
  // "A B" -> "B A": cost 2 either as 2 substitutions or 1 deletion + 1 insertion.
  const auto c = Align({"A", "B"}, {"B", "A"});
  EXPECT_EQ(c.Cost(), 2u);
  EXPECT_EQ(c.substitutions, 2u);
}

TEST(Wer, ExhaustiveOracleOnSmallPairs) {
  const auto report = oracle::RunExhaustive();
  EXPECT_EQ(report.pairs, 1093u * 1093u);
  EXPECT_EQ(report.cost_mismatches, 0u);
  EXPECT_EQ(report.unachievable_counts, 0u);
}

Words RandomWords(std::mt19937& gen, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> sym(0, 4);
  Words w(len(gen));
  for (auto& s : w) s = std::string(1, static_cast<char>('A' + sym(gen)));
  return w;
}

TEST(WerProperties, SelfDistanceIsZero) {
  std::mt19937 gen(1);
  for (int t = 0; t < 500; ++t) {
    auto a = RandomWords(gen, 12);
    if (a.empty()) a.push_back("A");
    EXPECT_DOUBLE_EQ(WerWords(a, a).wer, 0.0);
  }
}

TEST(WerProperties, BoundedByLongerLength) {
  std::mt19937 gen(2);
  for (int t = 0; t < 2000; ++t) {
    auto a = RandomWords(gen, 12);
    if (a.empty()) a.push_back("A");
    const auto b = RandomWords(gen, 12);
    const auto w = WerWords(a, b);
    EXPECT_LE(w.wer, static_cast<double>(std::max(a.size(), b.size())) / a.size() + 1e-12);
  }
}

TEST(WerProperties, TriangleInequality) {
  std::mt19937 gen(3);
  for (int t = 0; t < 3000; ++t) {
    const auto a = RandomWords(gen, 10);
    const auto b = RandomWords(gen, 10);
    const auto c = RandomWords(gen, 10);
    EXPECT_LE(Align(a, c).Cost(), Align(a, b).Cost() + Align(b, c).Cost());
  }
}

TEST(WerProperties, CountsAreConsistentWithLengths) {
  std::mt19937 gen(4);
  for (int t = 0; t < 2000; ++t) {
    const auto a = RandomWords(gen, 15);
    const auto b = RandomWords(gen, 15);
    const auto c = Align(a, b);
    // Every reference word is matched, substituted or deleted; likewise for
    // hypothesis words with insertions.
    EXPECT_EQ(a.size() - c.deletions, b.size() - c.insertions);
    EXPECT_LE(c.substitutions + c.deletions, a.size());
  }
}

}  // namespace
}  // namespace asrprobe::metrics
