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
#include <string>
#include <string_view>
#include <vector>

namespace asrprobe::report {

struct Color {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  /// "#rrggbb" for SVG attributes.
  std::string Hex() const;
};

/// 8-bit RGB raster with the few primitives a line chart needs.
class Canvas {
 public:
  Canvas(int width, int height, Color background);

  int width() const { return width_; }
  int height() const { return height_; }
  Color At(int x, int y) const;

  void Fill(int x, int y, Color c);
  void FillRect(int x0, int y0, int x1, int y1, Color c);
  /// Line of the given pixel thickness; `dash` > 0 alternates drawn and
  /// skipped runs of that many pixels.
  void Line(double x0, double y0, double x1, double y1, Color c, int thickness = 1, int dash = 0);
  void Disc(double cx, double cy, double radius, Color c);
  /// Text in the built-in bitmap font, top-left anchored, `scale` pixels per dot.
  void Text(int x, int y, std::string_view text, Color c, int scale = 1);
  /// Same as Text but rotated 90 degrees counter-clockwise, bottom-left anchored.
  void TextVertical(int x, int y, std::string_view text, Color c, int scale = 1);

  void WritePng(const std::string& path) const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> rgb_;
};

/// Pixel width of `text` at `scale` in the bitmap font.
int TextWidth(std::string_view text, int scale);
int TextHeight(int scale);

}  // namespace asrprobe::report
