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

#include "model/ctc.hpp"

#include <algorithm>

namespace asrprobe::model {

Transcript CollapseCtc(const std::vector<int>& frame_ids, const CtcVocabulary& vocab) {
  Transcript out;
  int previous = -1;
  for (int id : frame_ids) {
    if (id != previous && id != vocab.blank_id) out.token_ids.push_back(id);
    previous = id;
  }

  std::string text;
  for (int id : out.token_ids) {
    const std::string& token = vocab.tokens.at(static_cast<std::size_t>(id));
    if (token == vocab.word_delimiter) {
      if (!text.empty() && text.back() != ' ') text.push_back(' ');
    } else if (token.size() >= 2 && token.front() == '<' && token.back() == '>') {
      continue;
    } else {
      text += token;
    }
  }
  while (!text.empty() && text.back() == ' ') text.pop_back();
  out.text = std::move(text);
  return out;
}

Transcript GreedyCtcDecode(const std::vector<float>& logits, std::size_t frames,
                           const CtcVocabulary& vocab) {
  const std::size_t v = vocab.tokens.size();
  std::vector<int> ids(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto row = logits.begin() + static_cast<std::ptrdiff_t>(t * v);
    ids[t] = static_cast<int>(std::max_element(row, row + static_cast<std::ptrdiff_t>(v)) - row);
  }
  return CollapseCtc(ids, vocab);
}

}  // namespace asrprobe::model
