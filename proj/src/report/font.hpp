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

#include <array>
#include <cstdint>

namespace asrprobe::report {

inline constexpr int kGlyphWidth = 5;
inline constexpr int kGlyphHeight = 7;

/// 5x7 bitmap for a character: one byte per row, bit 4 is the leftmost
/// column. Lowercase letters share the uppercase glyphs; unknown characters
/// render as '?'.
const std::array<std::uint8_t, kGlyphHeight>& Glyph(char c);

}  // namespace asrprobe::report
