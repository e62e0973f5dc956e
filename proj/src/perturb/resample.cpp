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

#include "perturb/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace asrprobe::perturb {

namespace {

double Kaiser(double u, double beta) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - u * u)) / std::cyl_bessel_i(0.0, beta);
}

}  // namespace

std::size_t SincResampler::EdgeWidth(double step) {
  const double cutoff = std::min(1.0, 1.0 / step);
  const double half_width = kZeroCrossings / cutoff;
  return static_cast<std::size_t>(std::ceil(half_width / step)) + 1;
}

std::vector<double> SincResampler::Run(std::span<const double> input, double step,
                                       std::size_t out_len) {
  std::vector<double> out(out_len, 0.0);
  const auto n = static_cast<std::ptrdiff_t>(input.size());
  if (n == 0) return out;
  const double cutoff = std::min(1.0, 1.0 / step);
  const double half_width = kZeroCrossings / cutoff;
  for (std::size_t m = 0; m < out_len; ++m) {
    const double t = static_cast<double>(m) * step;
    if (cutoff == 1.0 && t == std::floor(t) && t < static_cast<double>(n)) {
      out[m] = input[static_cast<std::size_t>(t)];
      continue;
    }
    const auto lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::ceil(t - half_width)));
    const auto hi = std::min<std::ptrdiff_t>(n - 1, static_cast<std::ptrdiff_t>(std::floor(t + half_width)));
    double acc = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) {
      const double d = t - static_cast<double>(k);
      const double arg = cutoff * d;
      const double sinc =
          arg == 0.0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      acc += input[static_cast<std::size_t>(k)] * cutoff * sinc * Kaiser(d / half_width, kKaiserBeta);
    }
    out[m] = acc;
  }
  return out;
}

std::vector<double> ResampleBySpeed(std::span<const double> input, double factor) {
  const auto out_len = static_cast<std::size_t>(
      std::llround(static_cast<double>(input.size()) / factor));
  return SincResampler::Run(input, factor, out_len);
}

std::vector<double> ResampleRate(std::span<const double> input, int from_rate, int to_rate) {
  if (from_rate == to_rate) return {input.begin(), input.end()};
  const double step = static_cast<double>(from_rate) / static_cast<double>(to_rate);
  return ResampleBySpeed(input, step);
}

}  // namespace asrprobe::perturb
