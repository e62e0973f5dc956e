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
#include <string>
#include <vector>

#include <json.hpp>

#include "model/intervention.hpp"
#include "perturb/perturb.hpp"

namespace asrprobe::runner {

enum class ExperimentKind { kE1White, kE1Speed, kE1ChunkLen, kE1ChunkCount, kE2A, kE2B };

const char* ExperimentKindName(ExperimentKind kind);
ExperimentKind ParseExperimentKind(const std::string& name);
bool IsE1(ExperimentKind kind);

enum class MissingAudioPolicy { kAbort, kSkip };

/// One experiment. Field names match the JSON keys of the config file.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::kE1White;
  std::vector<std::string> models;
  std::string manifest;
  std::string output_dir = "results";
  std::uint64_t master_seed = 0;
  int workers = 1;

  /// e1-white: mixing probabilities; e2a: injection scales; e2b: input noise scales.
  std::vector<double> rho_grid;
  /// e1-white per-sample noise standard deviation.
  double sigma = 1.0;

  std::vector<double> speed_grid;
  perturb::SpeedUnits speed_units = perturb::SpeedUnits::kFactor;

  std::vector<std::size_t> chunk_len_grid;    // e1-chunklen, with chunk_count fixed
  std::vector<std::size_t> chunk_count_grid;  // e1-chunkcount, with chunk_len fixed
  std::size_t chunk_len = 100;
  std::size_t chunk_count = 100;

  /// e2a taps; empty means every tap 0..L of the model.
  std::vector<int> layers;
  std::vector<model::InjectionMode> modes = {model::InjectionMode::kAdditive};

  MissingAudioPolicy missing_audio = MissingAudioPolicy::kAbort;
  /// Resample manifest audio to the model rate at ingestion.
  bool resample_input = true;

  /// Directory relative paths in the config (manifest) are resolved against.
  std::string base_dir = ".";
};

/// Parses a JSON config object. Unknown keys and ill-typed values raise
/// kConfig. Grids left out get per-experiment defaults.
ExperimentConfig ParseConfig(const nlohmann::json& json, const std::string& base_dir = ".");
ExperimentConfig LoadConfig(const std::string& path);

nlohmann::json ConfigToJson(const ExperimentConfig& cfg);

/// SHA-256 (hex) over the canonical JSON of every field that changes what a
/// grid point means: grids, output_dir and workers are excluded, so extending
/// a grid keeps the hash while changing the seed or model does not.
std::string ConfigHash(const ExperimentConfig& cfg);

std::string ResolveManifestPath(const ExperimentConfig& cfg);

}  // namespace asrprobe::runner
