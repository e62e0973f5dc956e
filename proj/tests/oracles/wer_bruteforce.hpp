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

#pragma once

// Brute-force alignment oracle, independent of the dynamic program: an
// alignment is a monotone partial matching between reference and hypothesis
// positions. With K matched pairs of which X differ, the edit cost is
// X substitutions + (m - K) deletions + (n - K) insertions.

#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "metrics/wer.hpp"

namespace asrprobe::oracle {

inline constexpr int kMaxLen = 6;

/// Every monotone matching of an m x n grid, as bit masks over pair (i, j) at
/// bit i * kMaxLen + j.
inline std::vector<std::uint64_t> Matchings(int m, int n) {
  std::vector<std::uint64_t> out;
  std::function<void(int, int, std::uint64_t)> walk = [&](int i, int j, std::uint64_t mask) {
    out.push_back(mask);
    for (int a = i; a < m; ++a) {
      for (int b = j; b < n; ++b) walk(a + 1, b + 1, mask | (std::uint64_t{1} << (a * kMaxLen + b)));
    }
  };
  walk(0, 0, 0);
  return out;
}

struct OracleResult {
  std::size_t cost = 0;
  bool counts_achievable = false;
};

/// Minimal cost over every matching, and whether `counts` is realized by
/// some minimal matching.
inline OracleResult BruteForce(const std::vector<int>& ref, const std::vector<int>& hyp,
                               const std::vector<std::uint64_t>& matchings, const metrics::EditCounts& counts) {
  const int m = static_cast<int>(ref.size());
  const int n = static_cast<int>(hyp.size());
  std::uint64_t equal = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      if (ref[i] == hyp[j]) equal |= std::uint64_t{1} << (i * kMaxLen + j);
    }
  }
  // cost = m + n - K - (matched equal pairs); minimize by maximizing the sum.
  int best = -1;
  bool achievable = false;
  const int claimed_k = m - static_cast<int>(counts.deletions);
  for (std::uint64_t mask : matchings) {
    const int k = std::popcount(mask);
    const int eq = std::popcount(mask & equal);
    const int score = k + eq;
    if (score > best) {
      best = score;
      achievable = false;
    }
    if (score == best && k == claimed_k && k - eq == static_cast<int>(counts.substitutions) &&
        n - k == static_cast<int>(counts.insertions)) {
      achievable = true;
    }
  }
  return {static_cast<std::size_t>(m + n - best), achievable};
}

/// All sequences of length 0..max_len over `alphabet` symbols.
inline std::vector<std::vector<int>> AllSequences(int max_len, int alphabet) {
  std::vector<std::vector<int>> out = {{}};
  std::vector<std::vector<int>> frontier = {{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : frontier) {
      for (int a = 0; a < alphabet; ++a) {
        auto t = s;
        t.push_back(a);
        next.push_back(t);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

struct ExhaustiveReport {
  std::size_t pairs = 0;
  std::size_t cost_mismatches = 0;
  std::size_t unachievable_counts = 0;
};

/// Compares metrics::Align with the oracle on every sequence pair of length
/// <= kMaxLen over a 3-word vocabulary.
inline ExhaustiveReport RunExhaustive() {
  const std::vector<std::string> words = {"A", "B", "C"};
  const auto seqs = AllSequences(kMaxLen, 3);
  std::vector<std::vector<std::vector<std::uint64_t>>> matchings(kMaxLen + 1);
  for (int m = 0; m <= kMaxLen; ++m) {
    for (int n = 0; n <= kMaxLen; ++n) matchings[m].push_back(Matchings(m, n));
  }
  std::vector<std::vector<std::string>> as_words;
  for (const auto& s : seqs) {
    std::vector<std::string> w;
    for (int c : s) w.push_back(words[c]);
    as_words.push_back(std::move(w));
  }
  ExhaustiveReport report;
  for (std::size_t r = 0; r < seqs.size(); ++r) {
    for (std::size_t h = 0; h < seqs.size(); ++h) {
      const auto counts = metrics::Align(as_words[r], as_words[h]);
      const auto oracle = BruteForce(seqs[r], seqs[h], matchings[seqs[r].size()][seqs[h].size()], counts);
      ++report.pairs;
      report.cost_mismatches += oracle.cost != counts.Cost();
      report.unachievable_counts += !oracle.counts_achievable;
    }
  }
  return report;
}

}  // namespace asrprobe::oracle
