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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "runner/config.hpp"

namespace asrprobe::runner {

/// One point of a sweep: either the clean baseline for a model or one grid
/// cell. `Label()` is the stable key written to the `point` column and used
/// by resume.
struct GridPoint {
  std::string model_id;
  bool baseline = false;
  std::optional<double> rho;
  std::optional<double> speed;  // in the config's speed units
  std::optional<std::size_t> chunk_count;
  std::optional<std::size_t> chunk_len;
  std::optional<int> layer;
  std::optional<model::InjectionMode> mode;

  std::string Label() const;
};

/// One CSV row. e2b points expand into one row per tap (layer = tap,
/// dist = divergence); all other points are one row.
struct ResultRecord {
  std::string experiment;
  std::string model_id;
  std::string point;
  std::string mode;
  std::optional<int> layer;
  std::optional<double> rho;
  std::optional<double> sigma;
  std::optional<double> speed;
  std::optional<double> speed_factor;
  std::optional<std::size_t> chunk_count;
  std::optional<std::size_t> chunk_len;
  std::optional<double> wer;
  std::optional<double> wer_utt_mean;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_words = 0;
  std::size_t n_utts = 0;
  std::size_t n_skipped = 0;
  std::optional<double> dist;
  std::optional<double> avg_inference_seconds;
  std::optional<double> real_time_factor;
  std::uint64_t master_seed = 0;
  std::string config_hash;
};

/// Fixed column order of results.csv.
const std::vector<std::string>& ResultColumns();
/// Columns holding wall-clock measurements (excluded from determinism checks).
const std::vector<std::string>& TimingColumns();

std::string FormatCsvRow(const ResultRecord& record);
std::string CsvHeader();

inline constexpr const char* kResultsCsv = "results.csv";
inline constexpr const char* kResultsSidecar = "results.json";

struct ResultPaths {
  std::string csv;
  std::string sidecar;
};

ResultPaths PathsFor(const std::string& out_dir);

/// Creates out_dir if needed, writes the JSON sidecar and the CSV header when
/// the CSV does not exist yet. `models` maps model id -> per-model metadata.
ResultPaths PrepareResults(const ExperimentConfig& cfg, const nlohmann::json& models);

/// Appends rows and flushes, so an interrupted sweep keeps every finished point.
void AppendResults(const ResultPaths& paths, const std::vector<ResultRecord>& records);

/// Reads a results CSV as header-keyed string maps.
std::vector<std::map<std::string, std::string>> ReadResultsCsv(const std::string& path);

/// Policy metadata recorded in every sidecar.
nlohmann::json PolicyMetadata(const ExperimentConfig& cfg);

/// Grid points of `all` with no row in out_dir/results.csv. Throws
/// kHashMismatch when the recorded config hash differs from cfg's.
std::vector<GridPoint> RemainingPoints(const ExperimentConfig& cfg, const std::vector<GridPoint>& all);

/// Copy of a CSV with the timing columns blanked, for byte comparisons.
std::string StripTimingColumns(const std::string& csv_text);

}  // namespace asrprobe::runner
