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
#include <variant>
#include <vector>

#include "core/waveform.hpp"

namespace asrprobe::perturb {

/// Each coordinate is independently replaced by x_i + sigma * g_i with
/// probability mix_prob, g_i standard normal.
struct WhiteNoiseSpec {
  double mix_prob = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// Resample so the output lasts 1/speed_factor of the input at the same rate.
struct SpeedSpec {
  double speed_factor = 1.0;
};

/// Zero-fill num_chunks non-overlapping runs of chunk_len samples.
struct ChunkDropSpec {
  std::size_t num_chunks = 0;
  std::size_t chunk_len = 0;
  std::uint64_t seed = 0;
};

struct IdentitySpec {};

using PerturbationSpec = std::variant<IdentitySpec, WhiteNoiseSpec, SpeedSpec, ChunkDropSpec>;

// Stream tags; randomness for an utterance is keyed by (seed, waveform id, tag)
// so the same utterance sees the same draws at every grid point.
inline constexpr const char* kWhiteNoiseTag = "perturb/white-noise";
inline constexpr const char* kChunkDropTag = "perturb/chunk-drop";

Waveform ApplyWhiteNoise(const Waveform& x, const WhiteNoiseSpec& spec);
Waveform ApplySpeedPerturb(const Waveform& x, const SpeedSpec& spec);
Waveform ApplyChunkDrop(const Waveform& x, const ChunkDropSpec& spec);
Waveform Apply(const Waveform& x, const PerturbationSpec& spec);

/// Sorted start offsets of the chunks ApplyChunkDrop zeroes for a signal of
/// length n with the given utterance id.
std::vector<std::size_t> ChunkStarts(std::size_t n, const ChunkDropSpec& spec,
                                     const std::string& utterance_id);

/// How a user-facing speed value maps to the speed factor.
enum class SpeedUnits {
  kFactor,          // value is the factor itself
  kPercent,         // factor = value / 100
  kInversePercent,  // factor = 100 / value
};

double SpeedFactorFrom(double value, SpeedUnits units);
SpeedUnits ParseSpeedUnits(const std::string& name);
const char* SpeedUnitsName(SpeedUnits units);

}  // namespace asrprobe::perturb
