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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace asrprobe::metrics {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t Cost() const { return substitutions + deletions + insertions; }
};

struct WerBreakdown {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_words = 0;
  std::size_t hyp_words = 0;
  double wer = 0.0;
};

/// Unit-cost word-level Levenshtein alignment. When several minimal
/// alignments exist the traceback prefers substitution, then deletion, then
/// insertion; the total cost does not depend on that choice.
EditCounts Align(const std::vector<std::string>& reference,
                 const std::vector<std::string>& hypothesis);

/// Normalizes both strings and scores the hypothesis. Throws kUndefinedWer
/// when the normalized reference is empty.
WerBreakdown Wer(std::string_view reference, std::string_view hypothesis);

/// WER from pre-normalized word sequences.
WerBreakdown WerWords(const std::vector<std::string>& reference,
                      const std::vector<std::string>& hypothesis);

}  // namespace asrprobe::metrics
