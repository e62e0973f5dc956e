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
#include <memory>
#include <string>
#include <vector>

#include "model/ctc.hpp"
#include "model/model.hpp"

namespace asrprobe::model {

struct SyntheticShape {
  std::uint64_t seed = 0;
  int num_layers = 4;
  int width = 16;
};

/// Parses "synthetic:<seed>" or "synthetic:<seed>:<layers>:<width>".
/// Returns false when `model_id` is not a synthetic id at all; throws kLoad
/// when it is one but malformed.
bool ParseSyntheticId(const std::string& model_id, SyntheticShape* shape);

/// Deterministic stand-in encoder for hermetic tests.
///
/// The frame extractor cuts the waveform into non-overlapping frames of
/// `width` samples; tap 0 is those frames verbatim, so tap 0 is linear (the
/// identity) in the input. Block i computes h_i = tanh(A_i h_{i-1} + b_i)
/// per frame. The head maps h_L to 8 symbols (blank, word boundary and six
/// letters) and decodes greedily with CTC collapse. Weights are drawn from a
/// PRNG keyed by the seed.
class SyntheticModel final : public SpeechEncoder {
 public:
  static constexpr int kVocabSize = 8;

  SyntheticModel(std::string model_id, const SyntheticShape& shape);

  const ModelInfo& info() const override { return info_; }

 protected:
  Transcript ForwardImpl(const Waveform& x, const TapHook* hook) override;

 private:
  struct Block {
    std::vector<double> weight;  // width x width, row-major
    std::vector<double> bias;
  };

  ModelInfo info_;
  std::vector<Block> blocks_;
  std::vector<double> head_weight_;  // kVocabSize x width
  std::vector<double> head_bias_;
  CtcVocabulary vocab_;
};

}  // namespace asrprobe::model
