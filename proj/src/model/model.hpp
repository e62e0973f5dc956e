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
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/waveform.hpp"

namespace asrprobe::model {

/// Activations at one tap, stored frame-major: values[t * channels + c].
struct Tensor {
  std::size_t frames = 0;
  std::size_t channels = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// One tensor per tap, index 0..num_layers.
using LayerActivations = std::vector<Tensor>;

struct Transcript {
  std::string text;
  std::vector<int> token_ids;
};

struct ModelInfo {
  std::string model_id;
  /// Number of encoder blocks L; taps are 0..L.
  int num_layers = 0;
  int width = 0;
  int expected_sample_rate = 16000;
  /// Human-readable definition of what each tap holds; copied into results.
  std::string tap_definition;
  std::string vocabulary_note;
};

/// Called once per tap in increasing order with the tap's activations; the
/// callee may modify them in place and the forward pass continues from the
/// modified values.
using TapHook = std::function<void(int tap, Tensor& activations)>;

/// A layered speech encoder with a CTC head. Instances are not thread-safe:
/// one worker owns a handle at a time.
class SpeechEncoder {
 public:
  virtual ~SpeechEncoder() = default;

  virtual const ModelInfo& info() const = 0;

  /// Full forward pass plus greedy CTC decoding. `hook` may be null.
  Transcript Forward(const Waveform& x, const TapHook* hook = nullptr);

  bool warmed_up() const { return warmed_up_; }
  void MarkWarmedUp() { warmed_up_ = true; }

 protected:
  virtual Transcript ForwardImpl(const Waveform& x, const TapHook* hook) = 0;

 private:
  bool warmed_up_ = false;
};

std::unique_ptr<SpeechEncoder> LoadModel(const std::string& model_id);

Transcript Transcribe(SpeechEncoder& model, const Waveform& x);

std::pair<Transcript, LayerActivations> ForwardCollectActivations(SpeechEncoder& model,
                                                                  const Waveform& x);

}  // namespace asrprobe::model
