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
#include <map>
#include <string>
#include <vector>

namespace asrprobe::model {

/// Read-only view of a .safetensors file: an 8-byte little-endian header
/// length, a JSON header, then the raw tensor bytes.
class SafeTensors {
 public:
  static SafeTensors Open(const std::string& path);

  bool Contains(const std::string& name) const { return entries_.count(name) != 0; }
  std::vector<std::int64_t> Shape(const std::string& name) const;
  /// Tensor contents converted to float32 (F32, F16, BF16 and F64 accepted).
  std::vector<float> Float(const std::string& name) const;
  std::vector<std::string> Names() const;

 private:
  struct Entry {
    std::string dtype;
    std::vector<std::int64_t> shape;
    std::size_t begin = 0;
    std::size_t end = 0;
  };

  const Entry& Find(const std::string& name) const;

  std::string path_;
  std::vector<char> blob_;
  std::size_t data_start_ = 0;
  std::map<std::string, Entry> entries_;
};

}  // namespace asrprobe::model
