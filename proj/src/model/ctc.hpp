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

#include "model/model.hpp"

namespace asrprobe::model {

/// Token inventory for greedy CTC decoding.
struct CtcVocabulary {
  std::vector<std::string> tokens;  // id -> surface string
  int blank_id = 0;
  /// Token rendered as a word boundary ("|" in wav2vec2 vocabularies).
  std::string word_delimiter = "|";
};

/// Per-frame argmax over `logits` (frames x vocab, frame-major), collapse of
/// repeats, removal of blanks. Tokens of the form "<...>" other than the
/// blank are dropped from the text; the word delimiter becomes a space.
Transcript GreedyCtcDecode(const std::vector<float>& logits, std::size_t frames,
                           const CtcVocabulary& vocab);

/// Collapse on already-chosen per-frame ids.
Transcript CollapseCtc(const std::vector<int>& frame_ids, const CtcVocabulary& vocab);

}  // namespace asrprobe::model
