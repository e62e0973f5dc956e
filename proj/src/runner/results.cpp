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

#include "runner/results.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "metrics/text.hpp"
#include "core/version.hpp"

namespace asrprobe::runner {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

template <class T>
std::string Opt(const std::optional<T>& v) {
  return v ? fmt::format("{}", *v) : std::string();
}

}  // namespace

std::string GridPoint::Label() const {
  if (baseline) return "baseline";
  std::vector<std::string> parts;
  if (mode) parts.push_back(fmt::format("mode={}", model::InjectionModeName(*mode)));
  if (layer) parts.push_back(fmt::format("layer={}", *layer));
  if (rho) parts.push_back(fmt::format("rho={}", *rho));
  if (speed) parts.push_back(fmt::format("speed={}", *speed));
  if (chunk_count) parts.push_back(fmt::format("k={}", *chunk_count));
  if (chunk_len) parts.push_back(fmt::format("l={}", *chunk_len));
  return fmt::format("{}", fmt::join(parts, ";"));
}

const std::vector<std::string>& ResultColumns() {
  static const std::vector<std::string> columns = {
      "experiment",   "model_id",     "point",        "mode",
      "layer",        "rho",          "sigma",        "speed",
      "speed_factor", "chunk_count",  "chunk_len",    "wer",
      "wer_utt_mean", "substitutions", "deletions",   "insertions",
      "ref_words",    "n_utts",       "n_skipped",    "dist",
      "avg_inference_seconds",        "real_time_factor",
      "master_seed",  "config_hash",
  };
  return columns;
}

const std::vector<std::string>& TimingColumns() {
  static const std::vector<std::string> columns = {"avg_inference_seconds", "real_time_factor"};
  return columns;
}

std::string CsvHeader() { return fmt::format("{}\n", fmt::join(ResultColumns(), ",")); }

std::string FormatCsvRow(const ResultRecord& r) {
  const std::vector<std::string> fields = {
      CsvEscape(r.experiment),
      CsvEscape(r.model_id),
      CsvEscape(r.point),
      CsvEscape(r.mode),
      Opt(r.layer),
      Opt(r.rho),
      Opt(r.sigma),
      Opt(r.speed),
      Opt(r.speed_factor),
      Opt(r.chunk_count),
      Opt(r.chunk_len),
      Opt(r.wer),
      Opt(r.wer_utt_mean),
      fmt::format("{}", r.substitutions),
      fmt::format("{}", r.deletions),
      fmt::format("{}", r.insertions),
      fmt::format("{}", r.ref_words),
      fmt::format("{}", r.n_utts),
      fmt::format("{}", r.n_skipped),
      Opt(r.dist),
      Opt(r.avg_inference_seconds),
      Opt(r.real_time_factor),
      fmt::format("{}", r.master_seed),
      r.config_hash,
  };
  return fmt::format("{}\n", fmt::join(fields, ","));
}

ResultPaths PathsFor(const std::string& out_dir) {
  return {(fs::path(out_dir) / kResultsCsv).string(), (fs::path(out_dir) / kResultsSidecar).string()};
}

Json PolicyMetadata(const ExperimentConfig& cfg) {
  return {
      {"text_normalization", metrics::kNormalizationPolicy},
      {"wer_pooling", "corpus WER pools substitutions+deletions+insertions over pooled reference "
                      "words; wer_utt_mean is the per-utterance mean"},
      {"decoding", "greedy CTC argmax with repeat and blank collapse, no language model"},
      {"speed_mapping", fmt::format("speed column in '{}' units; speed_factor = output duration "
                                    "divisor",
                                    perturb::SpeedUnitsName(cfg.speed_units))},
      {"white_noise", "per-sample Bernoulli(rho) mask; selected samples get x_i + sigma * g_i"},
      {"chunk_drop", "zero-fill, non-overlapping uniformly placed chunks; infeasible utterances "
                     "skipped and counted in n_skipped"},
      {"divergence_dimension", "d_i = frames x channels of tap i for each utterance; per-utterance "
                               "dist_i averaged arithmetically"},
      {"injection_noise", "fresh N(0, I) per utterance keyed by (seed, utterance, layer, mode)"},
      {"timing", "average wall seconds per utterance around forward+decode, after one warmup "
                 "inference per model handle; real_time_factor = total wall / total audio seconds"},
  };
}

ResultPaths PrepareResults(const ExperimentConfig& cfg, const Json& models) {
  const ResultPaths paths = PathsFor(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot create output directory '{}': {}", cfg.output_dir, ec.message()));
  }
  Json sidecar = {
      {"config_hash", ConfigHash(cfg)},
      {"toolkit_version", kToolkitVersion},
      {"config", ConfigToJson(cfg)},
      {"policy", PolicyMetadata(cfg)},
      {"models", models},
      {"csv_columns", ResultColumns()},
  };
  {
    std::ofstream out(paths.sidecar, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", paths.sidecar));
    out << sidecar.dump(2) << '\n';
  }
  if (!fs::exists(paths.csv)) {
    std::ofstream out(paths.csv, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", paths.csv));
    out << CsvHeader();
  }
  return paths;
}

void AppendResults(const ResultPaths& paths, const std::vector<ResultRecord>& records) {
  std::string text;
  for (const auto& record : records) text += FormatCsvRow(record);
  std::ofstream out(paths.csv, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot append to '{}'", paths.csv));
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, fmt::format("short write to '{}'", paths.csv));
}

std::vector<std::map<std::string, std::string>> ReadResultsCsv(const std::string& path) {
  const auto rows = ParseCsv(ReadTextFile(path));
  std::vector<std::map<std::string, std::string>> out;
  if (rows.empty()) return out;
  const auto& header = rows.front();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw Error(ErrorCode::kParse, fmt::format("{}: row {} has {} fields, header has {}", path, r + 1,
                                                 rows[r].size(), header.size()));
    }
    std::map<std::string, std::string> row;
    for (std::size_t c = 0; c < header.size(); ++c) row[header[c]] = rows[r][c];
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<GridPoint> RemainingPoints(const ExperimentConfig& cfg, const std::vector<GridPoint>& all) {
  const ResultPaths paths = PathsFor(cfg.output_dir);
  if (!fs::exists(paths.sidecar) || !fs::exists(paths.csv)) return all;

  Json sidecar;
  try {
    sidecar = Json::parse(ReadTextFile(paths.sidecar));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, fmt::format("{}: {}", paths.sidecar, e.what()));
  }
  const std::string recorded = sidecar.value("config_hash", "");
  const std::string current = ConfigHash(cfg);
  if (recorded != current) {
    throw Error(ErrorCode::kHashMismatch,
                fmt::format("refusing to resume in '{}': results were produced by config hash {} but "
                            "the current config hashes to {}. Only grid lists, output_dir and workers "
                            "may change between runs; use a fresh output directory otherwise.",
                            cfg.output_dir, recorded, current));
  }

  std::set<std::pair<std::string, std::string>> done;
  for (const auto& row : ReadResultsCsv(paths.csv)) {
    done.emplace(row.at("model_id"), row.at("point"));
  }
  std::vector<GridPoint> remaining;
  for (const auto& point : all) {
    if (done.count({point.model_id, point.Label()}) == 0) remaining.push_back(point);
  }
  return remaining;
}

std::string StripTimingColumns(const std::string& csv_text) {
  auto rows = ParseCsv(csv_text);
  if (rows.empty()) return {};
  std::vector<std::size_t> blank;
  for (std::size_t c = 0; c < rows.front().size(); ++c) {
    for (const auto& name : TimingColumns()) {
      if (rows.front()[c] == name) blank.push_back(c);
    }
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (r > 0) {
      for (std::size_t c : blank) {
        if (c < rows[r].size()) rows[r][c].clear();
      }
    }
    std::vector<std::string> escaped;
    for (const auto& f : rows[r]) escaped.push_back(CsvEscape(f));
    out += fmt::format("{}\n", fmt::join(escaped, ","));
  }
  return out;
}

}  // namespace asrprobe::runner
