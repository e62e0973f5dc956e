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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace asrprobe::report {

struct ModelSummary {
  std::string model_id;
  std::optional<double> baseline_wer;
  /// Per-utterance inference seconds averaged over every timed row,
  /// weighted by the row's utterance count.
  std::optional<double> mean_inference_seconds;
  std::optional<double> mean_real_time_factor;
  /// mean_inference_seconds relative to the first timed model; set only when
  /// at least two models carry timings.
  std::optional<double> time_ratio;
  std::size_t timed_utterances = 0;
};

struct Summary {
  std::uint64_t master_seed = 0;
  std::vector<ModelSummary> models;  // order of first appearance
  bool has_ratio = false;
  /// Human-readable observations: timing direction, most sensitive
  /// injection layer, divergence trend with depth, perturbation optima.
  std::vector<std::string> findings;

  /// Tab-separated table (ratio column only when has_ratio), then one
  /// "# " line per finding.
  std::string ToText() const;
};

/// Aggregates one or more results CSVs. Rows from different master seeds, or
/// two config hashes for the same experiment and model, are a contract
/// error; so is a header without the timing columns.
Summary ExportSummary(const std::vector<std::string>& csv_paths);

}  // namespace asrprobe::report
