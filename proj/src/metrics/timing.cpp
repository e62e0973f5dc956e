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

#include "metrics/timing.hpp"

#include <fmt/format.h>

namespace asrprobe::metrics {

void Warmup(model::SpeechEncoder& model, const Waveform& x) {
  (void)model::Transcribe(model, x);
  model.MarkWarmedUp();
}

void RequireWarm(const model::SpeechEncoder& model) {
  if (!model.warmed_up()) {
    throw Error(ErrorCode::kContract,
                fmt::format("{} must be warmed up before timed inference", model.info().model_id));
  }
}

std::pair<model::Transcript, TimingRecord> TimedTranscribe(model::SpeechEncoder& model,
                                                           const Waveform& x) {
  return TimeCall(model, x, [&] { return model::Transcribe(model, x); });
}

}  // namespace asrprobe::metrics
