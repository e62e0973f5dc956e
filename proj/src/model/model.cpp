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

#include "model/model.hpp"

#include <fmt/format.h>

namespace asrprobe::model {

Transcript SpeechEncoder::Forward(const Waveform& x, const TapHook* hook) {
  RequireNonEmpty(x, info().model_id.c_str());
  if (x.sample_rate != info().expected_sample_rate) {
    throw Error(ErrorCode::kContract,
                fmt::format("{} expects {} Hz input, got {} Hz for '{}'", info().model_id,
                            info().expected_sample_rate, x.sample_rate, x.id));
  }
  return ForwardImpl(x, hook);
}

Transcript Transcribe(SpeechEncoder& model, const Waveform& x) { return model.Forward(x); }

std::pair<Transcript, LayerActivations> ForwardCollectActivations(SpeechEncoder& model,
                                                                  const Waveform& x) {
  LayerActivations taps(static_cast<std::size_t>(model.info().num_layers) + 1);
  const TapHook capture = [&](int tap, Tensor& activations) {
    taps[static_cast<std::size_t>(tap)] = activations;
  };
  Transcript transcript = model.Forward(x, &capture);
  return {std::move(transcript), std::move(taps)};
}

}  // namespace asrprobe::model
