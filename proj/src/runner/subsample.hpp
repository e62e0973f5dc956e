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

#include "runner/manifest.hpp"

namespace asrprobe::runner {

/// Picks `count` entries uniformly without replacement, keeping listing order.
std::vector<ManifestEntry> Subsample(const std::vector<ManifestEntry>& listing, std::size_t count,
                                     std::uint64_t seed);

/// Reads a split listing (manifest format), subsamples it and writes a
/// manifest whose audio paths are relative to the output file.
std::size_t SubsampleManifest(const std::string& listing_path, std::size_t count, std::uint64_t seed,
                              const std::string& out_path);

}  // namespace asrprobe::runner
