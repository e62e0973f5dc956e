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

#include <optional>
#include <string>

namespace asrprobe::model {

/// Environment variable naming the checkpoint cache directory.
inline constexpr const char* kModelCacheEnv = "ASRPROBE_MODEL_CACHE";

/// Resolves a checkpoint id to a directory. Tried in order: the id as a path;
/// <cache>/<id>; <cache>/<org>--<name>; the Hugging Face hub layout
/// <cache>/models--<org>--<name>/snapshots/<rev>. The cache defaults to
/// ~/.cache/asrprobe/models when the environment variable is unset.
std::optional<std::string> ResolveCheckpointDir(const std::string& model_id);

std::string ModelCacheDir();

}  // namespace asrprobe::model
