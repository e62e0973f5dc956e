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

#include "model/synthetic_model.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "core/rng.hpp"

namespace asrprobe::model {

namespace {

constexpr const char* kPrefix = "synthetic:";

template <class T>
bool ParseNumber(std::string_view s, T* out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

bool ParseSyntheticId(const std::string& model_id, SyntheticShape* shape) {
  if (model_id.rfind(kPrefix, 0) != 0) return false;
  std::vector<std::string_view> parts;
  std::string_view rest(model_id);
  rest.remove_prefix(std::string_view(kPrefix).size());
  while (true) {
    const auto colon = rest.find(':');
    parts.push_back(rest.substr(0, colon));
    if (colon == std::string_view::npos) break;
    rest.remove_prefix(colon + 1);
  }
  SyntheticShape parsed;
  bool ok = (parts.size() == 1 || parts.size() == 3) && ParseNumber(parts[0], &parsed.seed);
  if (ok && parts.size() == 3) {
    ok = ParseNumber(parts[1], &parsed.num_layers) && ParseNumber(parts[2], &parsed.width) &&
         parsed.num_layers >= 1 && parsed.width >= 1;
  }
  if (!ok) {
    throw Error(ErrorCode::kLoad,
                fmt::format("malformed synthetic model id '{}' (synthetic:<seed>[:<layers>:<width>])",
                            model_id));
  }
  *shape = parsed;
  return true;
}

SyntheticModel::SyntheticModel(std::string model_id, const SyntheticShape& shape) {
  info_.model_id = std::move(model_id);
  info_.num_layers = shape.num_layers;
  info_.width = shape.width;
  info_.expected_sample_rate = 16000;
  info_.tap_definition = fmt::format(
      "synthetic: tap 0 = raw non-overlapping {}-sample frames; tap i = output of block i",
      shape.width);
  info_.vocabulary_note = "synthetic 8-symbol alphabet";
  vocab_.tokens = {"<blank>", "|", "E", "T", "A", "O", "N", "S"};
  vocab_.blank_id = 0;

  const auto w = static_cast<std::size_t>(shape.width);
  Rng rng(DeriveStream(shape.seed, "", "synthetic/weights"));
  for (int layer = 0; layer < shape.num_layers; ++layer) {
    // The first block sees raw audio amplitudes and gets a larger gain.
    const double gain = (layer == 0 ? 4.0 : 1.5) / std::sqrt(static_cast<double>(w));
    Block block;
    block.weight.resize(w * w);
    block.bias.resize(w);
    for (double& v : block.weight) v = gain * rng.Normal();
    for (double& v : block.bias) v = 0.1 * rng.Normal();
    blocks_.push_back(std::move(block));
  }
  head_weight_.resize(kVocabSize * w);
  head_bias_.assign(kVocabSize, 0.0);
  for (double& v : head_weight_) v = rng.Normal() / std::sqrt(static_cast<double>(w));
  head_bias_[0] = 0.5;  // favour blanks so words stay short
}

Transcript SyntheticModel::ForwardImpl(const Waveform& x, const TapHook* hook) {
  const auto w = static_cast<std::size_t>(info_.width);
  const std::size_t frames = x.size() / w;
  if (frames == 0) {
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("'{}' has {} samples, fewer than one {}-sample frame", x.id, x.size(), w));
  }

  Tensor h;
  h.frames = frames;
  h.channels = w;
  h.values.assign(x.samples.begin(), x.samples.begin() + static_cast<std::ptrdiff_t>(frames * w));
  if (hook) (*hook)(0, h);

  Tensor next = h;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const Block& block = blocks_[b];
    for (std::size_t t = 0; t < frames; ++t) {
      const double* in = h.values.data() + t * w;
      double* out = next.values.data() + t * w;
      for (std::size_t o = 0; o < w; ++o) {
        double acc = block.bias[o];
        const double* row = block.weight.data() + o * w;
        for (std::size_t i = 0; i < w; ++i) acc += row[i] * in[i];
        out[o] = std::tanh(acc);
      }
    }
    std::swap(h, next);
    if (hook) (*hook)(static_cast<int>(b) + 1, h);
  }

  std::vector<int> ids(frames);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* in = h.values.data() + t * w;
    int best = 0;
    double best_score = 0.0;
    for (int s = 0; s < kVocabSize; ++s) {
      double acc = head_bias_[static_cast<std::size_t>(s)];
      const double* row = head_weight_.data() + static_cast<std::size_t>(s) * w;
      for (std::size_t i = 0; i < w; ++i) acc += row[i] * in[i];
      if (s == 0 || acc > best_score) {
        best = s;
        best_score = acc;
      }
    }
    ids[t] = best;
  }
  return CollapseCtc(ids, vocab_);
}

}  // namespace asrprobe::model
