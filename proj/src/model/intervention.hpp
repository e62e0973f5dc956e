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
#include <string_view>

#include "model/model.hpp"

namespace asrprobe::model {

enum class InjectionMode { kAdditive, kMultiplicative };

const char* InjectionModeName(InjectionMode mode);
InjectionMode ParseInjectionMode(const std::string& name);

/// Noise injected at a single tap during inference:
///   additive:        out' = out + rho * g
///   multiplicative:  out'_j = out_j * (1 + rho * g_j)
/// with g iid standard normal over all frames x channels of the tap. A fresh
/// realization is drawn per utterance from (seed, utterance id, layer, mode);
/// it does not depend on rho, so a rho sweep rescales one realization.
struct InterventionSpec {
  int layer = 0;
  InjectionMode mode = InjectionMode::kAdditive;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

/// Applies the spec's noise to `activations` in place. rho == 0 leaves them
/// untouched.
void ApplyIntervention(const InterventionSpec& spec, std::string_view utterance_id,
                       Tensor& activations);

/// Runs inference with `spec` applied at its tap; every other tap is
/// computed as usual from the modified stream.
Transcript ForwardWithIntervention(SpeechEncoder& model, const Waveform& x,
                                   const InterventionSpec& spec);

/// Same, additionally returning all taps (post-intervention at spec.layer).
std::pair<Transcript, LayerActivations> ForwardWithInterventionCollect(
    SpeechEncoder& model, const Waveform& x, const InterventionSpec& spec);

}  // namespace asrprobe::model
