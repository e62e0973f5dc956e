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

#include "model/safetensors.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "core/error.hpp"

namespace asrprobe::model {

namespace {

float HalfToFloat(std::uint16_t h) {
  const std::uint32_t sign = (h & 0x8000u) << 16;
  std::uint32_t exponent = (h >> 10) & 0x1fu;
  std::uint32_t mantissa = h & 0x3ffu;
  std::uint32_t bits;
  if (exponent == 0) {
    if (mantissa == 0) {
      bits = sign;
    } else {
      // Subnormal: renormalize.
      exponent = 127 - 15 + 1;
      while ((mantissa & 0x400u) == 0) {
        mantissa <<= 1;
        --exponent;
      }
      mantissa &= 0x3ffu;
      bits = sign | (exponent << 23) | (mantissa << 13);
    }
  } else if (exponent == 0x1f) {
    bits = sign | 0x7f800000u | (mantissa << 13);
  } else {
    bits = sign | ((exponent + 127 - 15) << 23) | (mantissa << 13);
  }
  return std::bit_cast<float>(bits);
}

}  // namespace

SafeTensors SafeTensors::Open(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw Error(ErrorCode::kLoad, fmt::format("cannot open checkpoint '{}'", path));
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  SafeTensors st;
  st.path_ = path;
  st.blob_.resize(size);
  in.read(st.blob_.data(), static_cast<std::streamsize>(size));
  if (!in || size < 8) throw Error(ErrorCode::kLoad, fmt::format("truncated checkpoint '{}'", path));

  std::uint64_t header_len = 0;
  for (int i = 7; i >= 0; --i) {
    header_len = (header_len << 8) | static_cast<unsigned char>(st.blob_[static_cast<std::size_t>(i)]);
  }
  if (header_len > size - 8) {
    throw Error(ErrorCode::kLoad, fmt::format("corrupt safetensors header in '{}'", path));
  }
  st.data_start_ = 8 + header_len;

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(st.blob_.begin() + 8, st.blob_.begin() + static_cast<std::ptrdiff_t>(st.data_start_));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kLoad, fmt::format("bad safetensors header in '{}': {}", path, e.what()));
  }
  for (const auto& [name, value] : header.items()) {
    if (name == "__metadata__") continue;
    Entry entry;
    entry.dtype = value.at("dtype").get<std::string>();
    entry.shape = value.at("shape").get<std::vector<std::int64_t>>();
    const auto offsets = value.at("data_offsets").get<std::vector<std::size_t>>();
    if (offsets.size() != 2 || offsets[0] > offsets[1] || st.data_start_ + offsets[1] > size) {
      throw Error(ErrorCode::kLoad, fmt::format("tensor '{}' out of bounds in '{}'", name, path));
    }
    entry.begin = offsets[0];
    entry.end = offsets[1];
    st.entries_.emplace(name, std::move(entry));
  }
  return st;
}

const SafeTensors::Entry& SafeTensors::Find(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorCode::kContract, fmt::format("checkpoint '{}' has no tensor '{}'", path_, name));
  }
  return it->second;
}

std::vector<std::int64_t> SafeTensors::Shape(const std::string& name) const { return Find(name).shape; }

std::vector<std::string> SafeTensors::Names() const {
  std::vector<std::string> names;
  for (const auto& [name, entry] : entries_) names.push_back(name);
  return names;
}

std::vector<float> SafeTensors::Float(const std::string& name) const {
  const Entry& entry = Find(name);
  const char* data = blob_.data() + data_start_ + entry.begin;
  const std::size_t bytes = entry.end - entry.begin;
  std::size_t count = 1;
  for (auto d : entry.shape) count *= static_cast<std::size_t>(d);

  std::size_t width = 0;
  if (entry.dtype == "F32") width = 4;
  else if (entry.dtype == "F16" || entry.dtype == "BF16") width = 2;
  else if (entry.dtype == "F64") width = 8;
  else throw Error(ErrorCode::kContract, fmt::format("tensor '{}' has unsupported dtype {}", name, entry.dtype));
  if (count * width != bytes) {
    throw Error(ErrorCode::kContract, fmt::format("tensor '{}' size does not match its shape", name));
  }

  std::vector<float> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    const char* p = data + i * width;
    if (width == 4) {
      std::memcpy(&out[i], p, 4);
    } else if (width == 8) {
      double v;
      std::memcpy(&v, p, 8);
      out[i] = static_cast<float>(v);
    } else {
      std::uint16_t h;
      std::memcpy(&h, p, 2);
      out[i] = entry.dtype == "F16" ? HalfToFloat(h)
                                    : std::bit_cast<float>(static_cast<std::uint32_t>(h) << 16);
    }
  }
  return out;
}

}  // namespace asrprobe::model
