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

#include "metrics/text.hpp"

#include <cctype>

namespace asrprobe::metrics {

namespace {

bool IsWordChar(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

}  // namespace

std::vector<std::string> NormalizeText(std::string_view s) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (IsWordChar(c)) {
      current.push_back(static_cast<char>(std::toupper(c)));
    } else if (c == '\'') {
      const bool after_word = !current.empty() && IsWordChar(static_cast<unsigned char>(current.back()));
      const bool before_word = i + 1 < s.size() && IsWordChar(static_cast<unsigned char>(s[i + 1]));
      if (after_word && before_word) current.push_back('\'');
    } else if (std::isspace(c) != 0) {
      flush();
    }
  }
  flush();
  return words;
}

}  // namespace asrprobe::metrics
