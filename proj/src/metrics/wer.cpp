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

#include "metrics/wer.hpp"

#include <algorithm>

#include "core/error.hpp"
#include "metrics/text.hpp"

namespace asrprobe::metrics {

EditCounts Align(const std::vector<std::string>& reference,
                 const std::vector<std::string>& hypothesis) {
  const std::size_t m = reference.size();
  const std::size_t n = hypothesis.size();
  const std::size_t width = n + 1;
  std::vector<std::size_t> cost((m + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= m; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= n; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditCounts counts;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool match = reference[i - 1] == hypothesis[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (match ? 0 : 1)) {
        if (!match) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

WerBreakdown WerWords(const std::vector<std::string>& reference,
                      const std::vector<std::string>& hypothesis) {
  if (reference.empty()) {
    throw Error(ErrorCode::kUndefinedWer, "WER is undefined for an empty reference");
  }
  const EditCounts counts = Align(reference, hypothesis);
  WerBreakdown out;
  out.substitutions = counts.substitutions;
  out.deletions = counts.deletions;
  out.insertions = counts.insertions;
  out.ref_words = reference.size();
  out.hyp_words = hypothesis.size();
  out.wer = static_cast<double>(counts.Cost()) / static_cast<double>(reference.size());
  return out;
}

WerBreakdown Wer(std::string_view reference, std::string_view hypothesis) {
  return WerWords(NormalizeText(reference), NormalizeText(hypothesis));
}

}  // namespace asrprobe::metrics
