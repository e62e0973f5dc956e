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

#include "model/registry.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include <fmt/format.h>

#include "model/model.hpp"
#include "model/synthetic_model.hpp"
#include "model/wav2vec2_model.hpp"

namespace asrprobe::model {

namespace fs = std::filesystem;

namespace {

bool LooksLikeCheckpoint(const fs::path& dir) {
  std::error_code ec;
  return fs::is_regular_file(dir / "config.json", ec);
}

std::string Replace(std::string s, char from, const std::string& to) {
  std::string out;
  for (char c : s) {
    if (c == from) out += to;
    else out.push_back(c);
  }
  return out;
}

}  // namespace

std::string ModelCacheDir() {
  if (const char* env = std::getenv(kModelCacheEnv); env != nullptr && *env != '\0') return env;
  const char* home = std::getenv("HOME");
  return (fs::path(home ? home : ".") / ".cache" / "asrprobe" / "models").string();
}

std::optional<std::string> ResolveCheckpointDir(const std::string& model_id) {
  std::error_code ec;
  if (LooksLikeCheckpoint(model_id)) return model_id;
  const fs::path cache = ModelCacheDir();
  for (const fs::path& candidate : {cache / model_id, cache / Replace(model_id, '/', "--")}) {
    if (LooksLikeCheckpoint(candidate)) return candidate.string();
  }
  const fs::path snapshots = cache / ("models--" + Replace(model_id, '/', "--")) / "snapshots";
  if (fs::is_directory(snapshots, ec)) {
    std::vector<fs::path> revisions;
    for (const auto& entry : fs::directory_iterator(snapshots, ec)) {
      if (LooksLikeCheckpoint(entry.path())) revisions.push_back(entry.path());
    }
    std::sort(revisions.begin(), revisions.end());
    if (!revisions.empty()) return revisions.front().string();
  }
  return std::nullopt;
}

std::unique_ptr<SpeechEncoder> LoadModel(const std::string& model_id) {
  SyntheticShape shape;
  if (ParseSyntheticId(model_id, &shape)) return std::make_unique<SyntheticModel>(model_id, shape);
  const auto dir = ResolveCheckpointDir(model_id);
  if (!dir) {
    throw Error(ErrorCode::kLoad,
                fmt::format("cannot resolve model '{}' (not synthetic:<seed>, not a checkpoint "
                            "directory, not found under {} = {})",
                            model_id, kModelCacheEnv, ModelCacheDir()));
  }
  return LoadWav2Vec2Checkpoint(model_id, *dir);
}

}  // namespace asrprobe::model
