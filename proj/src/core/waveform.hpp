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

#include <string>
#include <vector>

#include "core/error.hpp"

namespace asrprobe {

/// Mono audio with nominal amplitudes in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;
  std::string id;

  std::size_t size() const { return samples.size(); }
  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
};

inline void RequireNonEmpty(const Waveform& x, const char* where) {
  if (x.samples.empty()) {
    throw Error(ErrorCode::kInvalidInput, std::string(where) + ": empty waveform");
  }
  if (x.sample_rate <= 0) {
    throw Error(ErrorCode::kInvalidInput, std::string(where) + ": sample rate must be positive");
  }
}

}  // namespace asrprobe
