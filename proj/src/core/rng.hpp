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
#include <initializer_list>
#include <string_view>

namespace asrprobe {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit FNV-1a. Stable across platforms, used to fold strings into keys.
std::uint64_t HashString(std::string_view s);

/// Derives an independent stream key from a master seed, an utterance id, an
/// operator tag and any number of extra integer words. The derivation depends
/// only on its arguments, never on call order.
std::uint64_t DeriveStream(std::uint64_t master_seed, std::string_view utterance_id,
                           std::string_view tag,
                           std::initializer_list<std::uint64_t> extra = {});

/// Bit pattern of a double, for folding real parameters into stream keys.
std::uint64_t DoubleBits(double v);

/// xoshiro256** seeded through SplitMix64. Uniform and normal variates are
/// produced by explicit formulas so streams are identical on every platform
/// (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t key);

  std::uint64_t NextU64();
  /// Uniform on [0, 1) with 53 random bits.
  double Uniform();
  /// Standard normal via Box-Muller; pairs are consumed in order.
  double Normal();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t Below(std::uint64_t n);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace asrprobe
