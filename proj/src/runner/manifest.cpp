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

#include "runner/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "core/error.hpp"
#include "metrics/text.hpp"

namespace asrprobe::runner {

namespace fs = std::filesystem;
using Json = nlohmann::json;

std::vector<ManifestEntry> ReadManifestEntries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open manifest '{}'", path));
  const fs::path base = fs::path(path).parent_path();

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParse, fmt::format("{}:{}: {}", path, line_no, why));
    };
    Json json;
    try {
      json = Json::parse(line);
    } catch (const Json::exception& e) {
      throw fail(fmt::format("invalid JSON: {}", e.what()));
    }
    if (!json.is_object()) throw fail("expected a JSON object");
    for (const auto& [key, value] : json.items()) {
      if (key != "id" && key != "audio_path" && key != "reference" && key != "sample_rate") {
        throw fail(fmt::format("unexpected field '{}'", key));
      }
    }
    ManifestEntry entry;
    try {
      entry.id = json.at("id").get<std::string>();
      entry.audio_path = json.at("audio_path").get<std::string>();
      entry.reference = json.at("reference").get<std::string>();
      entry.sample_rate = json.at("sample_rate").get<int>();
    } catch (const Json::exception& e) {
      throw fail(fmt::format("bad or missing field: {}", e.what()));
    }
    if (entry.id.empty()) throw fail("empty id");
    if (entry.sample_rate <= 0) throw fail(fmt::format("sample_rate {} is not positive", entry.sample_rate));
    if (metrics::NormalizeText(entry.reference).empty()) {
      throw fail(fmt::format("reference of '{}' is empty after normalization", entry.id));
    }
    if (!seen.insert(entry.id).second) {
      throw Error(ErrorCode::kParse,
                  fmt::format("{}:{}: duplicate utterance id '{}'", path, line_no, entry.id));
    }
    if (fs::path(entry.audio_path).is_relative()) {
      entry.audio_path = (base / entry.audio_path).lexically_normal().string();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

ManifestLoad LoadManifest(const std::string& path, MissingAudioPolicy policy) {
  ManifestLoad load;
  for (auto& entry : ReadManifestEntries(path)) {
    std::error_code ec;
    if (!fs::is_regular_file(entry.audio_path, ec)) {
      const std::string why = fmt::format("audio file '{}' not found", entry.audio_path);
      if (policy == MissingAudioPolicy::kAbort) {
        throw Error(ErrorCode::kIo, fmt::format("manifest entry '{}': {}", entry.id, why));
      }
      load.skipped.push_back(fmt::format("{}: {}", entry.id, why));
      continue;
    }
    load.entries.push_back(std::move(entry));
  }
  return load;
}

void WriteManifest(const std::string& path, const std::vector<ManifestEntry>& entries,
                   const std::string& relative_to) {
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) fs::create_directories(parent, ec);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write manifest '{}'", path));
  for (const auto& entry : entries) {
    std::string audio = entry.audio_path;
    if (!relative_to.empty()) {
      audio = fs::absolute(audio).lexically_normal().lexically_relative(relative_to).string();
    }
    Json json = {{"id", entry.id},
                 {"audio_path", audio},
                 {"reference", entry.reference},
                 {"sample_rate", entry.sample_rate}};
    out << json.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, fmt::format("short write to '{}'", path));
}

}  // namespace asrprobe::runner
