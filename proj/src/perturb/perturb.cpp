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

#include "perturb/perturb.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "core/rng.hpp"
#include "perturb/resample.hpp"

namespace asrprobe::perturb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Waveform ApplyWhiteNoise(const Waveform& x, const WhiteNoiseSpec& spec) {
  RequireNonEmpty(x, "white noise");
  if (!(spec.mix_prob >= 0.0 && spec.mix_prob <= 1.0)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("white noise: mixing probability {} outside [0, 1]", spec.mix_prob));
  }
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("white noise: sigma {} must be finite and >= 0", spec.sigma));
  }
  Waveform out = x;
  if (spec.mix_prob == 0.0 || spec.sigma == 0.0) return out;

  // One (mask, noise) pair is drawn per coordinate regardless of mix_prob, so
  // masks are nested across mixing probabilities for a fixed seed.
  Rng rng(DeriveStream(spec.seed, x.id, kWhiteNoiseTag));
  for (double& sample : out.samples) {
    const double u = rng.Uniform();
    const double g = rng.Normal();
    if (u < spec.mix_prob) sample += spec.sigma * g;
  }
  return out;
}

Waveform ApplySpeedPerturb(const Waveform& x, const SpeedSpec& spec) {
  RequireNonEmpty(x, "speed perturbation");
  if (!(spec.speed_factor > 0.0) || !std::isfinite(spec.speed_factor)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("speed perturbation: factor {} must be > 0", spec.speed_factor));
  }
  Waveform out;
  out.id = x.id;
  out.sample_rate = x.sample_rate;
  out.samples = ResampleBySpeed(x.samples, spec.speed_factor);
  if (out.samples.empty()) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("speed perturbation: factor {} leaves no samples of {}",
                            spec.speed_factor, x.size()));
  }
  return out;
}

std::vector<std::size_t> ChunkStarts(std::size_t n, const ChunkDropSpec& spec,
                                     const std::string& utterance_id) {
  const std::size_t k = spec.num_chunks;
  const std::size_t l = spec.chunk_len;
  if (k == 0 || l == 0) return {};
  if (l > n || k > n / l) {
    throw Error(ErrorCode::kInfeasibleDrop,
                fmt::format("chunk drop: {} chunks of {} samples do not fit in {} samples", k, l, n));
  }

  // Slot sampling. Collapsing each chunk to a single slot turns a placement of
  // k runs into a k-subset of slots; drawing that subset uniformly gives a
  // uniform placement with no rejection. A one-sample gap between runs is
  // required whenever it fits so the zeroed set splits into exactly k runs.
  const bool gapped = n - k * l + 1 >= k;
  const std::size_t slots = gapped ? n - k * l + 1 : n - k * l + k;
  const std::size_t stride = gapped ? l : l - 1;

  Rng rng(DeriveStream(spec.seed, utterance_id, kChunkDropTag));
  std::vector<std::size_t> starts;
  starts.reserve(k);
  // Selection sampling: visits slots in order, so the output is sorted.
  std::size_t needed = k;
  for (std::size_t slot = 0; slot < slots && needed > 0; ++slot) {
    const std::size_t remaining = slots - slot;
    if (rng.Below(remaining) < needed) {
      starts.push_back(slot + starts.size() * stride);
      --needed;
    }
  }
  return starts;
}

Waveform ApplyChunkDrop(const Waveform& x, const ChunkDropSpec& spec) {
  RequireNonEmpty(x, "chunk drop");
  Waveform out = x;
  for (std::size_t start : ChunkStarts(x.size(), spec, x.id)) {
    std::fill_n(out.samples.begin() + static_cast<std::ptrdiff_t>(start), spec.chunk_len, 0.0);
  }
  return out;
}

Waveform Apply(const Waveform& x, const PerturbationSpec& spec) {
  return std::visit(
      Overloaded{
          [&](const IdentitySpec&) {
            RequireNonEmpty(x, "perturbation");
            return x;
          },
          [&](const WhiteNoiseSpec& s) { return ApplyWhiteNoise(x, s); },
          [&](const SpeedSpec& s) { return ApplySpeedPerturb(x, s); },
          [&](const ChunkDropSpec& s) { return ApplyChunkDrop(x, s); },
      },
      spec);
}

double SpeedFactorFrom(double value, SpeedUnits units) {
  double factor = value;
  switch (units) {
    case SpeedUnits::kFactor: break;
    case SpeedUnits::kPercent: factor = value / 100.0; break;
    case SpeedUnits::kInversePercent: factor = value > 0.0 ? 100.0 / value : 0.0; break;
  }
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("speed value {} ({}) does not give a positive factor", value,
                            SpeedUnitsName(units)));
  }
  return factor;
}

SpeedUnits ParseSpeedUnits(const std::string& name) {
  if (name == "factor") return SpeedUnits::kFactor;
  if (name == "percent") return SpeedUnits::kPercent;
  if (name == "inverse-percent") return SpeedUnits::kInversePercent;
  throw Error(ErrorCode::kInvalidParameter,
              fmt::format("unknown speed units '{}' (factor | percent | inverse-percent)", name));
}

const char* SpeedUnitsName(SpeedUnits units) {
  switch (units) {
    case SpeedUnits::kFactor: return "factor";
    case SpeedUnits::kPercent: return "percent";
    case SpeedUnits::kInversePercent: return "inverse-percent";
  }
  return "factor";
}

}  // namespace asrprobe::perturb
