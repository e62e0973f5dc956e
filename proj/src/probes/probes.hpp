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

#include <cstdint>
#include <string>
#include <vector>

#include "model/intervention.hpp"
#include "model/model.hpp"

namespace asrprobe::probes {

using model::InjectionMode;
using model::InterventionSpec;

/// out' = out + rho * g at tap `layer`.
InterventionSpec MakeAdditiveInjection(int layer, double rho, std::uint64_t seed);

/// out'_j = out_j * (1 + rho * g_j) at tap `layer`.
InterventionSpec MakeMultiplicativeInjection(int layer, double rho, std::uint64_t seed);

InterventionSpec MakeInjection(InjectionMode mode, int layer, double rho, std::uint64_t seed);

/// Per-tap RMS activation gap between a clean input and the same input with
/// additive Gaussian noise:
///   dist_i = ||out_i(x) - out_i(x + rho * g)||_2 / sqrt(d_i),
/// d_i = frames * channels of tap i for that utterance.
struct DivergenceProfile {
  std::string model_id;
  double rho = 0.0;
  std::vector<double> dist;  // indexed by tap
  std::size_t n_utts = 0;
};

/// Stream tag for the input noise g; the realization depends on
/// (seed, utterance id) only, not on rho.
inline constexpr const char* kDivergenceInputTag = "probe/divergence-input";

DivergenceProfile ComputeDivergence(const model::LayerActivations& clean,
                                    const model::LayerActivations& noisy);

/// Runs the clean and corrupted forward passes (one noise realization shared
/// by every tap) and returns the single-utterance profile.
DivergenceProfile DivergenceProfileFor(model::SpeechEncoder& model, const Waveform& x, double rho,
                                       std::uint64_t seed);

/// Arithmetic mean of dist_i across utterances; every profile must share
/// model and rho.
DivergenceProfile AggregateDivergence(const std::vector<DivergenceProfile>& profiles);

}  // namespace asrprobe::probes
