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

#include <string>
#include <vector>

#include "runner/config.hpp"

namespace asrprobe::runner {

/// One JSON Lines record: exactly the keys id, audio_path, reference, sample_rate.
struct ManifestEntry {
  std::string id;
  std::string audio_path;  // resolved against the manifest's directory
  std::string reference;
  int sample_rate = 0;
};

struct ManifestLoad {
  std::vector<ManifestEntry> entries;
  /// "<id>: <reason>" for entries dropped under MissingAudioPolicy::kSkip.
  std::vector<std::string> skipped;
};

/// Parses and validates a manifest. Parse errors name the line number;
/// duplicate ids name the id. Entries whose audio file is absent either abort
/// ingestion (kIo) or are skipped, per `policy`.
ManifestLoad LoadManifest(const std::string& path,
                          MissingAudioPolicy policy = MissingAudioPolicy::kAbort);

/// Parses without checking that audio files exist (split listings).
std::vector<ManifestEntry> ReadManifestEntries(const std::string& path);

void WriteManifest(const std::string& path, const std::vector<ManifestEntry>& entries,
                   const std::string& relative_to = {});

}  // namespace asrprobe::runner
