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

#include "probes/probes.hpp"

#include <cmath>

#include <fmt/format.h>

#include "core/rng.hpp"

namespace asrprobe::probes {

namespace {

void CheckRho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw Error(ErrorCode::kInvalidParameter,
                fmt::format("noise scale {} must be finite and >= 0", rho));
  }
}

}  // namespace

InterventionSpec MakeInjection(InjectionMode mode, int layer, double rho, std::uint64_t seed) {
  CheckRho(rho);
  if (layer < 0) {
    throw Error(ErrorCode::kInvalidParameter, fmt::format("injection layer {} is negative", layer));
  }
  return InterventionSpec{layer, mode, rho, seed};
}

InterventionSpec MakeAdditiveInjection(int layer, double rho, std::uint64_t seed) {
  return MakeInjection(InjectionMode::kAdditive, layer, rho, seed);
}

InterventionSpec MakeMultiplicativeInjection(int layer, double rho, std::uint64_t seed) {
  return MakeInjection(InjectionMode::kMultiplicative, layer, rho, seed);
}

DivergenceProfile ComputeDivergence(const model::LayerActivations& clean,
                                    const model::LayerActivations& noisy) {
  if (clean.size() != noisy.size()) {
    throw Error(ErrorCode::kContract, "activation sets have different tap counts");
  }
  DivergenceProfile profile;
  profile.n_utts = 1;
  profile.dist.reserve(clean.size());
  for (std::size_t tap = 0; tap < clean.size(); ++tap) {
    const auto& a = clean[tap].values;
    const auto& b = noisy[tap].values;
    if (a.size() != b.size() || a.empty()) {
      throw Error(ErrorCode::kContract,
                  fmt::format("tap {} shapes differ between clean and noisy runs", tap));
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = a[j] - b[j];
      sum += d * d;
    }
    profile.dist.push_back(std::sqrt(sum) / std::sqrt(static_cast<double>(a.size())));
  }
  return profile;
}

DivergenceProfile DivergenceProfileFor(model::SpeechEncoder& model, const Waveform& x, double rho,
                                       std::uint64_t seed) {
  CheckRho(rho);
  RequireNonEmpty(x, "divergence profile");
  const auto clean = model::ForwardCollectActivations(model, x).second;

  Waveform corrupted = x;
  if (rho != 0.0) {
    Rng rng(DeriveStream(seed, x.id, kDivergenceInputTag));
    for (double& s : corrupted.samples) s += rho * rng.Normal();
  }
  const auto noisy = model::ForwardCollectActivations(model, corrupted).second;

  DivergenceProfile profile = ComputeDivergence(clean, noisy);
  profile.model_id = model.info().model_id;
  profile.rho = rho;
  return profile;
}

DivergenceProfile AggregateDivergence(const std::vector<DivergenceProfile>& profiles) {
  if (profiles.empty()) {
    throw Error(ErrorCode::kInvalidInput, "cannot aggregate an empty list of divergence profiles");
  }
  DivergenceProfile out;
  out.model_id = profiles.front().model_id;
  out.rho = profiles.front().rho;
  out.dist.assign(profiles.front().dist.size(), 0.0);
  for (const auto& p : profiles) {
    if (p.rho != out.rho) {
      throw Error(ErrorCode::kContract,
                  fmt::format("cannot aggregate profiles with rho {} and {}", out.rho, p.rho));
    }
    if (p.model_id != out.model_id || p.dist.size() != out.dist.size()) {
      throw Error(ErrorCode::kContract, "cannot aggregate profiles from different models");
    }
    for (std::size_t i = 0; i < p.dist.size(); ++i) out.dist[i] += p.dist[i];
  }
  for (double& d : out.dist) d /= static_cast<double>(profiles.size());
  out.n_utts = profiles.size();
  return out;
}

}  // namespace asrprobe::probes
