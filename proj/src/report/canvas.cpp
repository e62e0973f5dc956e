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

#include "report/canvas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include <fmt/format.h>
#include <png.h>

#include "core/error.hpp"
#include "report/font.hpp"

namespace asrprobe::report {

std::string Color::Hex() const { return fmt::format("#{:02x}{:02x}{:02x}", r, g, b); }

Canvas::Canvas(int width, int height, Color background)
    : width_(width), height_(height), rgb_(static_cast<std::size_t>(width) * height * 3) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("canvas size {}x{} is empty", width, height));
  }
  FillRect(0, 0, width - 1, height - 1, background);
}

Color Canvas::At(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  return {rgb_[i], rgb_[i + 1], rgb_[i + 2]};
}

void Canvas::Fill(int x, int y, Color c) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 3;
  rgb_[i] = c.r;
  rgb_[i + 1] = c.g;
  rgb_[i + 2] = c.b;
}

void Canvas::FillRect(int x0, int y0, int x1, int y1, Color c) {
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) Fill(x, y, c);
  }
}

void Canvas::Line(double x0, double y0, double x1, double y1, Color c, int thickness, int dash) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  const int steps = std::max(1, static_cast<int>(std::ceil(len)));
  const int lo = -(thickness - 1) / 2;
  const int hi = thickness / 2;
  for (int s = 0; s <= steps; ++s) {
    if (dash > 0 && (s / dash) % 2 == 1) continue;
    const double t = static_cast<double>(s) / steps;
    const int px = static_cast<int>(std::lround(x0 + t * (x1 - x0)));
    const int py = static_cast<int>(std::lround(y0 + t * (y1 - y0)));
    for (int dy = lo; dy <= hi; ++dy) {
      for (int dx = lo; dx <= hi; ++dx) Fill(px + dx, py + dy, c);
    }
  }
}

void Canvas::Disc(double cx, double cy, double radius, Color c) {
  const int x0 = static_cast<int>(std::floor(cx - radius));
  const int x1 = static_cast<int>(std::ceil(cx + radius));
  const int y0 = static_cast<int>(std::floor(cy - radius));
  const int y1 = static_cast<int>(std::ceil(cy + radius));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (std::hypot(x - cx, y - cy) <= radius) Fill(x, y, c);
    }
  }
}

void Canvas::Text(int x, int y, std::string_view text, Color c, int scale) {
  for (char ch : text) {
    const auto& rows = Glyph(ch);
    for (int r = 0; r < kGlyphHeight; ++r) {
      for (int col = 0; col < kGlyphWidth; ++col) {
        if (rows[r] & (1u << (kGlyphWidth - 1 - col))) {
          FillRect(x + col * scale, y + r * scale, x + (col + 1) * scale - 1, y + (r + 1) * scale - 1, c);
        }
      }
    }
    x += (kGlyphWidth + 1) * scale;
  }
}

void Canvas::TextVertical(int x, int y, std::string_view text, Color c, int scale) {
  for (char ch : text) {
    const auto& rows = Glyph(ch);
    for (int r = 0; r < kGlyphHeight; ++r) {
      for (int col = 0; col < kGlyphWidth; ++col) {
        if (rows[r] & (1u << (kGlyphWidth - 1 - col))) {
          // Rotating CCW maps glyph column to -y and glyph row to +x.
          const int px = x + r * scale;
          const int py = y - (col + 1) * scale + 1;
          FillRect(px, py, px + scale - 1, py + scale - 1, c);
        }
      }
    }
    y -= (kGlyphWidth + 1) * scale;
  }
}

void Canvas::WritePng(const std::string& path) const {
  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path));
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::kIo, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, fmt::format("libpng failed while writing '{}'", path));
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width_, height_, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height_; ++y) {
    png_write_row(png, const_cast<png_bytep>(&rgb_[static_cast<std::size_t>(y) * width_ * 3]));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

int TextWidth(std::string_view text, int scale) {
  if (text.empty()) return 0;
  return static_cast<int>(text.size()) * (kGlyphWidth + 1) * scale - scale;
}

int TextHeight(int scale) { return kGlyphHeight * scale; }

}  // namespace asrprobe::report
