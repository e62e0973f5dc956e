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

#include "core/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include <fmt/format.h>

namespace asrprobe {

namespace {

std::uint32_t ReadLe32(const unsigned char* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

std::uint16_t ReadLe16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutLe32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void PutLe16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void PutTag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Waveform ReadWav(const std::string& path, const std::string& id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, fmt::format("cannot open audio file '{}'", path));
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kParse, fmt::format("{}: {}", path, why));
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_len = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t len = ReadLe32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min<std::size_t>(len, bytes.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw fail("truncated fmt chunk");
      format = ReadLe16(chunk + 8);
      channels = ReadLe16(chunk + 10);
      rate = ReadLe32(chunk + 12);
      bits = ReadLe16(chunk + 22);
      if (format == 0xFFFE && avail >= 26) format = ReadLe16(chunk + 32);  // extensible
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_len = avail;
    }
    pos = body + len + (len & 1u);
  }
  if (channels == 0) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");
  if (channels != 1) throw fail(fmt::format("expected mono audio, found {} channels", channels));
  if (rate == 0) throw fail("sample rate is zero");

  Waveform x;
  x.sample_rate = static_cast<int>(rate);
  x.id = id;
  if (format == 1 && bits == 16) {
    x.samples.resize(data_len / 2);
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
      const auto v = static_cast<std::int16_t>(ReadLe16(data + 2 * i));
      x.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    x.samples.resize(data_len / 4);
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
      float v;
      std::uint32_t word = ReadLe32(data + 4 * i);
      std::memcpy(&v, &word, sizeof v);
      x.samples[i] = static_cast<double>(v);
    }
  } else {
    throw fail(fmt::format("unsupported sample format {} with {} bits", format, bits));
  }
  return x;
}

void WriteWav(const std::string& path, const Waveform& x, WavEncoding encoding) {
  const bool pcm = encoding == WavEncoding::kPcm16;
  const std::uint16_t bytes_per_sample = pcm ? 2 : 4;
  const auto data_len = static_cast<std::uint32_t>(x.samples.size() * bytes_per_sample);

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  PutTag(out, "RIFF");
  PutLe32(out, 36 + data_len);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutLe32(out, 16);
  PutLe16(out, pcm ? 1 : 3);
  PutLe16(out, 1);
  PutLe32(out, static_cast<std::uint32_t>(x.sample_rate));
  PutLe32(out, static_cast<std::uint32_t>(x.sample_rate) * bytes_per_sample);
  PutLe16(out, bytes_per_sample);
  PutLe16(out, static_cast<std::uint16_t>(bytes_per_sample * 8));
  PutTag(out, "data");
  PutLe32(out, data_len);
  for (double s : x.samples) {
    if (pcm) {
      const double scaled = std::round(std::clamp(s, -1.0, 32767.0 / 32768.0) * 32768.0);
      PutLe16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
    } else {
      const auto f = static_cast<float>(s);
      std::uint32_t word;
      std::memcpy(&word, &f, sizeof word);
      PutLe32(out, word);
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, fmt::format("cannot write audio file '{}'", path));
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!file) throw Error(ErrorCode::kIo, fmt::format("short write to '{}'", path));
}

}  // namespace asrprobe
