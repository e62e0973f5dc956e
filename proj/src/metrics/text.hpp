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
#include <string_view>
#include <vector>

namespace asrprobe::metrics {

/// Identifier of the normalization policy, written into result metadata.
inline constexpr const char* kNormalizationPolicy =
    "uppercase; punctuation deleted except apostrophes between word characters; whitespace split";

/// Uppercases ASCII letters, deletes punctuation (an apostrophe survives only
/// between two word characters) and splits on whitespace. Bytes >= 0x80 are
/// treated as word characters so UTF-8 text passes through.
std::vector<std::string> NormalizeText(std::string_view s);

}  // namespace asrprobe::metrics
