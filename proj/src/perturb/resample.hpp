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

#include <cstddef>
#include <span>
#include <vector>

namespace asrprobe::perturb {

/// Band-limited windowed-sinc interpolation.
///
/// Output sample m is read from the input at fractional position m * step.
/// When step > 1 (downsampling) the sinc cutoff drops to 1/step of the input
/// Nyquist band so the result is alias-free. The kernel spans
/// kZeroCrossings zero crossings of the cutoff on each side and is tapered
/// with a Kaiser window (beta = kKaiserBeta). Positions falling exactly on an
/// input sample with unit cutoff reproduce that sample bit-exactly.
struct SincResampler {
  static constexpr int kZeroCrossings = 16;
  static constexpr double kKaiserBeta = 8.6;

  /// Number of output samples at each end whose kernel support is truncated
  /// by the signal boundary, for a given step.
  static std::size_t EdgeWidth(double step);

  static std::vector<double> Run(std::span<const double> input, double step,
                                 std::size_t out_len);
};

/// Speed change: output duration = input duration / factor, same nominal rate.
/// Output length is round(n / factor).
std::vector<double> ResampleBySpeed(std::span<const double> input, double factor);

/// Rate conversion from `from_rate` to `to_rate`, preserving duration.
std::vector<double> ResampleRate(std::span<const double> input, int from_rate, int to_rate);

}  // namespace asrprobe::perturb
