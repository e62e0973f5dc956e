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

#include "runner/subsample.hpp"

#include <filesystem>

#include <fmt/format.h>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace asrprobe::runner {

std::vector<ManifestEntry> Subsample(const std::vector<ManifestEntry>& listing, std::size_t count,
                                     std::uint64_t seed) {
  if (count > listing.size()) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("cannot sample {} utterances from a listing of {}", count, listing.size()));
  }
  Rng rng(DeriveStream(seed, "", "runner/subsample"));
  std::vector<ManifestEntry> out;
  out.reserve(count);
  std::size_t needed = count;
  for (std::size_t i = 0; i < listing.size() && needed > 0; ++i) {
    if (rng.Below(listing.size() - i) < needed) {
      out.push_back(listing[i]);
      --needed;
    }
  }
  return out;
}

std::size_t SubsampleManifest(const std::string& listing_path, std::size_t count, std::uint64_t seed,
                              const std::string& out_path) {
  const auto picked = Subsample(ReadManifestEntries(listing_path), count, seed);
  auto parent = std::filesystem::absolute(out_path).parent_path();
  WriteManifest(out_path, picked, parent.string());
  return picked.size();
}

}  // namespace asrprobe::runner
