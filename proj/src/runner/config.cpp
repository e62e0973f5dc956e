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

#include "runner/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "core/error.hpp"

namespace asrprobe::runner {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment",     "models",           "manifest",    "output_dir",  "master_seed",
    "workers",        "rho_grid",         "sigma",       "speed_grid",  "speed_units",
    "chunk_len_grid", "chunk_count_grid", "chunk_len",   "chunk_count", "layers",
    "modes",          "missing_audio",    "resample_input",
};

// Grid axes and execution knobs; everything else feeds the config hash.
const std::set<std::string> kUnhashedKeys = {
    "rho_grid", "speed_grid", "chunk_len_grid", "chunk_count_grid", "layers", "modes",
    "output_dir", "workers",
};

template <class T>
void Read(const Json& json, const char* key, T* out) {
  auto it = json.find(key);
  if (it == json.end()) return;
  try {
    *out = it->get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, fmt::format("config key '{}': {}", key, e.what()));
  }
}

/// Runs `parse`, reporting a bad value as a config error on `key`.
template <class Fn>
auto AsConfigError(const char* key, Fn&& parse) -> decltype(parse()) {
  try {
    return parse();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, fmt::format("config key '{}': {}", key, e.what()));
  }
}

void ApplyDefaults(ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::kE1White:
      if (cfg.rho_grid.empty()) cfg.rho_grid = {0.0, 0.05, 0.1, 0.2, 0.4};
      break;
    case ExperimentKind::kE1Speed:
      if (cfg.speed_grid.empty()) {
        cfg.speed_grid = cfg.speed_units == perturb::SpeedUnits::kFactor
                             ? std::vector<double>{0.8, 0.9, 1.0, 1.1, 1.2}
                             : std::vector<double>{80, 90, 100, 110, 120};
      }
      break;
    case ExperimentKind::kE1ChunkLen:
      if (cfg.chunk_len_grid.empty()) cfg.chunk_len_grid = {0, 50, 100, 200, 400};
      break;
    case ExperimentKind::kE1ChunkCount:
      if (cfg.chunk_count_grid.empty()) cfg.chunk_count_grid = {0, 25, 50, 100, 200};
      break;
    case ExperimentKind::kE2A:
      if (cfg.rho_grid.empty()) cfg.rho_grid = {0.0, 0.1, 0.5, 1.0};
      break;
    case ExperimentKind::kE2B:
      if (cfg.rho_grid.empty()) cfg.rho_grid = {0.05, 0.1, 0.2};
      break;
  }
}

void Validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& what) { return Error(ErrorCode::kConfig, what); };
  if (cfg.models.empty()) throw fail("config lists no models");
  if (cfg.manifest.empty()) throw fail("config has no manifest");
  if (cfg.workers < 1) throw fail(fmt::format("workers must be >= 1, got {}", cfg.workers));
  if ((cfg.experiment == ExperimentKind::kE2A || cfg.experiment == ExperimentKind::kE2B) &&
      cfg.models.size() != 1) {
    throw fail(fmt::format("{} takes exactly one model", ExperimentKindName(cfg.experiment)));
  }
  for (double rho : cfg.rho_grid) {
    if (!(rho >= 0.0)) throw fail(fmt::format("rho_grid value {} is negative", rho));
    if (cfg.experiment == ExperimentKind::kE1White && rho > 1.0) {
      throw fail(fmt::format("mixing probability {} exceeds 1", rho));
    }
  }
  if (!(cfg.sigma >= 0.0)) throw fail("sigma must be >= 0");
  for (double s : cfg.speed_grid) {
    AsConfigError("speed_grid", [&] { return perturb::SpeedFactorFrom(s, cfg.speed_units); });
  }
  for (int layer : cfg.layers) {
    if (layer < 0) throw fail(fmt::format("layer {} is negative", layer));
  }
  if (cfg.modes.empty()) throw fail("modes is empty");
  bool grid_empty = false;
  switch (cfg.experiment) {
    case ExperimentKind::kE1White:
    case ExperimentKind::kE2A:
    case ExperimentKind::kE2B: grid_empty = cfg.rho_grid.empty(); break;
    case ExperimentKind::kE1Speed: grid_empty = cfg.speed_grid.empty(); break;
    case ExperimentKind::kE1ChunkLen: grid_empty = cfg.chunk_len_grid.empty(); break;
    case ExperimentKind::kE1ChunkCount: grid_empty = cfg.chunk_count_grid.empty(); break;
  }
  if (grid_empty) throw fail("parameter grid is empty");
}

}  // namespace

const char* ExperimentKindName(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kE1White: return "e1-white";
    case ExperimentKind::kE1Speed: return "e1-speed";
    case ExperimentKind::kE1ChunkLen: return "e1-chunklen";
    case ExperimentKind::kE1ChunkCount: return "e1-chunkcount";
    case ExperimentKind::kE2A: return "e2a";
    case ExperimentKind::kE2B: return "e2b";
  }
  return "?";
}

ExperimentKind ParseExperimentKind(const std::string& name) {
  for (auto kind : {ExperimentKind::kE1White, ExperimentKind::kE1Speed, ExperimentKind::kE1ChunkLen,
                    ExperimentKind::kE1ChunkCount, ExperimentKind::kE2A, ExperimentKind::kE2B}) {
    if (name == ExperimentKindName(kind)) return kind;
  }
  throw Error(ErrorCode::kConfig,
              fmt::format("unknown experiment '{}' (e1-white | e1-speed | e1-chunklen | "
                          "e1-chunkcount | e2a | e2b)",
                          name));
}

bool IsE1(ExperimentKind kind) {
  return kind != ExperimentKind::kE2A && kind != ExperimentKind::kE2B;
}

ExperimentConfig ParseConfig(const Json& json, const std::string& base_dir) {
  if (!json.is_object()) throw Error(ErrorCode::kConfig, "config must be a JSON object");
  for (const auto& [key, value] : json.items()) {
    if (kKnownKeys.count(key) == 0) {
      throw Error(ErrorCode::kConfig, fmt::format("unknown config key '{}'", key));
    }
  }
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  std::string text;
  if (!json.contains("experiment")) throw Error(ErrorCode::kConfig, "config lacks 'experiment'");
  Read(json, "experiment", &text);
  cfg.experiment = ParseExperimentKind(text);
  if (json.contains("models") && json.at("models").is_string()) {
    cfg.models = {json.at("models").get<std::string>()};
  } else {
    Read(json, "models", &cfg.models);
  }
  Read(json, "manifest", &cfg.manifest);
  Read(json, "output_dir", &cfg.output_dir);
  Read(json, "master_seed", &cfg.master_seed);
  Read(json, "workers", &cfg.workers);
  Read(json, "rho_grid", &cfg.rho_grid);
  Read(json, "sigma", &cfg.sigma);
  Read(json, "speed_grid", &cfg.speed_grid);
  if (json.contains("speed_units")) {
    Read(json, "speed_units", &text);
    cfg.speed_units = AsConfigError("speed_units", [&] { return perturb::ParseSpeedUnits(text); });
  }
  Read(json, "chunk_len_grid", &cfg.chunk_len_grid);
  Read(json, "chunk_count_grid", &cfg.chunk_count_grid);
  Read(json, "chunk_len", &cfg.chunk_len);
  Read(json, "chunk_count", &cfg.chunk_count);
  Read(json, "layers", &cfg.layers);
  if (json.contains("modes")) {
    std::vector<std::string> names;
    Read(json, "modes", &names);
    cfg.modes.clear();
    for (const auto& name : names) {
      cfg.modes.push_back(AsConfigError("modes", [&] { return model::ParseInjectionMode(name); }));
    }
  }
  if (json.contains("missing_audio")) {
    Read(json, "missing_audio", &text);
    if (text == "abort") cfg.missing_audio = MissingAudioPolicy::kAbort;
    else if (text == "skip") cfg.missing_audio = MissingAudioPolicy::kSkip;
    else throw Error(ErrorCode::kConfig, fmt::format("missing_audio must be abort or skip, got '{}'", text));
  }
  Read(json, "resample_input", &cfg.resample_input);
  ApplyDefaults(cfg);
  Validate(cfg);
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open config '{}'", path));
  Json json;
  try {
    json = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kConfig, fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
  }
  const fs::path parent = fs::path(path).parent_path();
  return ParseConfig(json, parent.empty() ? "." : parent.string());
}

Json ConfigToJson(const ExperimentConfig& cfg) {
  Json json;
  json["experiment"] = ExperimentKindName(cfg.experiment);
  json["models"] = cfg.models;
  json["manifest"] = cfg.manifest;
  json["output_dir"] = cfg.output_dir;
  json["master_seed"] = cfg.master_seed;
  json["workers"] = cfg.workers;
  json["rho_grid"] = cfg.rho_grid;
  json["sigma"] = cfg.sigma;
  json["speed_grid"] = cfg.speed_grid;
  json["speed_units"] = perturb::SpeedUnitsName(cfg.speed_units);
  json["chunk_len_grid"] = cfg.chunk_len_grid;
  json["chunk_count_grid"] = cfg.chunk_count_grid;
  json["chunk_len"] = cfg.chunk_len;
  json["chunk_count"] = cfg.chunk_count;
  json["layers"] = cfg.layers;
  std::vector<std::string> modes;
  for (auto mode : cfg.modes) modes.emplace_back(model::InjectionModeName(mode));
  json["modes"] = modes;
  json["missing_audio"] = cfg.missing_audio == MissingAudioPolicy::kAbort ? "abort" : "skip";
  json["resample_input"] = cfg.resample_input;
  return json;
}

std::string ConfigHash(const ExperimentConfig& cfg) {
  Json json = ConfigToJson(cfg);
  for (const auto& key : kUnhashedKeys) json.erase(key);
  const std::string canonical = json.dump();  // object keys are sorted

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kIo, "SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string ResolveManifestPath(const ExperimentConfig& cfg) {
  const fs::path manifest(cfg.manifest);
  if (manifest.is_absolute()) return manifest.string();
  return (fs::path(cfg.base_dir) / manifest).lexically_normal().string();
}

}  // namespace asrprobe::runner
