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

#include <memory>
#include <string>

#include "model/model.hpp"

namespace asrprobe::model {

/// Loads a wav2vec2- or HuBERT-family CTC checkpoint from a directory holding
/// config.json, model.safetensors and vocab.json (preprocessor_config.json is
/// optional). Both the post-norm ("group" feature norm) and the pre-norm
/// ("layer" feature norm, stable layer norm) encoder variants are supported.
///
/// Taps: tap 0 is the feature projection output (convolutional features
/// projected to the encoder width, before the positional convolution); tap i
/// is the output of transformer layer i. For pre-norm encoders the final
/// encoder layer norm is applied after tap L.
std::unique_ptr<SpeechEncoder> LoadWav2Vec2Checkpoint(const std::string& model_id,
                                                      const std::string& directory);

}  // namespace asrprobe::model
