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

#include <chrono>
#include <string>
#include <utility>

#include "model/model.hpp"

namespace asrprobe::metrics {

struct TimingRecord {
  std::string utterance_id;
  double wall_seconds = 0.0;
  double audio_seconds = 0.0;
};

/// Monotonic wall-clock timer.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Runs one discarded inference and marks the handle warmed up.
void Warmup(model::SpeechEncoder& model, const Waveform& x);

/// Times `run()` (the forward and decode call only). Throws kContract when the
/// handle has not been warmed up.
template <class Fn>
auto TimeCall(model::SpeechEncoder& model, const Waveform& x, Fn&& run)
    -> std::pair<decltype(run()), TimingRecord>;

std::pair<model::Transcript, TimingRecord> TimedTranscribe(model::SpeechEncoder& model,
                                                           const Waveform& x);

void RequireWarm(const model::SpeechEncoder& model);

template <class Fn>
auto TimeCall(model::SpeechEncoder& model, const Waveform& x, Fn&& run)
    -> std::pair<decltype(run()), TimingRecord> {
  RequireWarm(model);
  Stopwatch watch;
  auto result = run();
  TimingRecord record{x.id, watch.Seconds(), x.DurationSeconds()};
  // Clock granularity can report zero for tiny synthetic inputs.
  if (record.wall_seconds <= 0.0) record.wall_seconds = 1e-9;
  return {std::move(result), std::move(record)};
}

}  // namespace asrprobe::metrics
