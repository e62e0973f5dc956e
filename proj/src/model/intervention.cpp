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

#include "model/intervention.hpp"

#include <cmath>

#include <fmt/format.h>

#include "core/rng.hpp"

namespace asrprobe::model {

namespace {

void CheckSpec(const SpeechEncoder& model, const InterventionSpec& spec) {
  const int num_layers = model.info().num_layers;
  if (spec.layer < 0 || spec.layer > num_layers) {
    throw Error(ErrorCode::kContract,
                fmt::format("injection layer {} outside [0, {}] for {}", spec.layer, num_layers,
                            model.info().model_id));
  }
  if (!(spec.rho >= 0.0) || !std::isfinite(spec.rho)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("injection scale {} must be finite and >= 0", spec.rho));
  }
}

}  // namespace

const char* InjectionModeName(InjectionMode mode) {
  return mode == InjectionMode::kAdditive ? "additive" : "multiplicative";
}

InjectionMode ParseInjectionMode(const std::string& name) {
  if (name == "additive") return InjectionMode::kAdditive;
  if (name == "multiplicative") return InjectionMode::kMultiplicative;
  throw Error(ErrorCode::kInvalidParameter,
              fmt::format("unknown injection mode '{}' (additive | multiplicative)", name));
}

void ApplyIntervention(const InterventionSpec& spec, std::string_view utterance_id,
                       Tensor& activations) {
  if (spec.rho == 0.0) return;
  Rng rng(DeriveStream(spec.seed, utterance_id, "probe/injection",
                       {static_cast<std::uint64_t>(spec.layer),
                        static_cast<std::uint64_t>(spec.mode)}));
  if (spec.mode == InjectionMode::kAdditive) {
    for (double& v : activations.values) v += spec.rho * rng.Normal();
  } else {
    for (double& v : activations.values) v *= 1.0 + spec.rho * rng.Normal();
  }
}

Transcript ForwardWithIntervention(SpeechEncoder& model, const Waveform& x,
                                   const InterventionSpec& spec) {
  CheckSpec(model, spec);
  const TapHook inject = [&](int tap, Tensor& activations) {
    if (tap == spec.layer) ApplyIntervention(spec, x.id, activations);
  };
  return model.Forward(x, &inject);
}

std::pair<Transcript, LayerActivations> ForwardWithInterventionCollect(
    SpeechEncoder& model, const Waveform& x, const InterventionSpec& spec) {
  CheckSpec(model, spec);
  LayerActivations taps(static_cast<std::size_t>(model.info().num_layers) + 1);
  const TapHook hook = [&](int tap, Tensor& activations) {
    if (tap == spec.layer) ApplyIntervention(spec, x.id, activations);
    taps[static_cast<std::size_t>(tap)] = activations;
  };
  Transcript transcript = model.Forward(x, &hook);
  return {std::move(transcript), std::move(taps)};
}

}  // namespace asrprobe::model
