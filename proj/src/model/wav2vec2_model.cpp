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

#include "model/wav2vec2_model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <json.hpp>

#include "model/ctc.hpp"
#include "model/safetensors.hpp"

namespace asrprobe::model {

namespace {

using Matrix = Eigen::MatrixXf;  // channels x frames
using RowMajorMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXf;
using Json = nlohmann::json;

constexpr Eigen::Index kConvBlockFrames = 2048;

Json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kLoad, fmt::format("cannot open '{}'", path.string()));
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kLoad, fmt::format("malformed JSON in '{}': {}", path.string(), e.what()));
  }
}

template <class T>
T Get(const Json& cfg, const char* key, T fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end() || it->is_null()) return fallback;
  return it->get<T>();
}

template <class T>
T Require(const Json& cfg, const char* key) {
  auto it = cfg.find(key);
  if (it == cfg.end()) throw Error(ErrorCode::kContract, fmt::format("config.json lacks '{}'", key));
  return it->get<T>();
}

void Gelu(Matrix& m) {
  m = m.unaryExpr([](float v) {
    return 0.5f * v * (1.0f + std::erf(v * static_cast<float>(M_SQRT1_2)));
  });
}

struct LayerNorm {
  Vector gamma;
  Vector beta;
  float eps = 1e-5f;

  /// Normalizes each column (one frame) over its channels.
  void Apply(Matrix& m) const {
    for (Eigen::Index t = 0; t < m.cols(); ++t) {
      auto col = m.col(t);
      const float mean = col.mean();
      const float var = (col.array() - mean).square().mean();
      col = ((col.array() - mean) / std::sqrt(var + eps)).matrix().cwiseProduct(gamma) + beta;
    }
  }
};

struct Linear {
  RowMajorMatrix weight;  // out x in
  Vector bias;

  Matrix operator()(const Matrix& x) const {
    Matrix y = weight * x;
    y.colwise() += bias;
    return y;
  }
};

struct Conv1d {
  RowMajorMatrix weight;  // out x (in * kernel), torch (out, in, kernel) layout
  Vector bias;            // empty when the layer has no bias
  int in_channels = 0;
  int kernel = 0;
  int stride = 1;

  /// Valid (unpadded) strided convolution of a channels x frames input.
  Matrix operator()(const Matrix& x) const {
    const Eigen::Index t_in = x.cols();
    if (t_in < kernel) {
      throw Error(ErrorCode::kInvalidInput, "input too short for the convolutional feature extractor");
    }
    const Eigen::Index t_out = (t_in - kernel) / stride + 1;
    Matrix y(weight.rows(), t_out);
    Matrix cols(static_cast<Eigen::Index>(in_channels) * kernel, std::min(kConvBlockFrames, t_out));
    for (Eigen::Index start = 0; start < t_out; start += kConvBlockFrames) {
      const Eigen::Index count = std::min(kConvBlockFrames, t_out - start);
      for (Eigen::Index j = 0; j < count; ++j) {
        const Eigen::Index base = (start + j) * stride;
        for (int c = 0; c < in_channels; ++c) {
          for (int k = 0; k < kernel; ++k) cols(c * kernel + k, j) = x(c, base + k);
        }
      }
      y.middleCols(start, count).noalias() = weight * cols.leftCols(count);
    }
    if (bias.size() > 0) y.colwise() += bias;
    return y;
  }
};

/// Grouped "same" convolution with weight normalization folded in.
struct PositionalConv {
  std::vector<RowMajorMatrix> group_weights;  // each (C/G) x ((C/G) * kernel)
  Vector bias;
  int channels = 0;
  int groups = 1;
  int kernel = 0;

  Matrix operator()(const Matrix& x) const {
    const Eigen::Index t = x.cols();
    const int pad = kernel / 2;
    const int per_group = channels / groups;
    Matrix padded = Matrix::Zero(channels, t + 2 * pad);
    padded.middleCols(pad, t) = x;
    // Even kernels yield t + 1 outputs; the trailing one is dropped.
    Matrix y(channels, t);
    Matrix cols(static_cast<Eigen::Index>(per_group) * kernel, t);
    for (int g = 0; g < groups; ++g) {
      for (Eigen::Index j = 0; j < t; ++j) {
        for (int c = 0; c < per_group; ++c) {
          for (int k = 0; k < kernel; ++k) cols(c * kernel + k, j) = padded(g * per_group + c, j + k);
        }
      }
      y.middleRows(static_cast<Eigen::Index>(g) * per_group, per_group).noalias() =
          group_weights[static_cast<std::size_t>(g)] * cols;
    }
    y.colwise() += bias;
    return y;
  }
};

struct EncoderLayer {
  Linear q, k, v, out;
  LayerNorm attn_norm;
  Linear ff_in, ff_out;
  LayerNorm final_norm;
};

class Wav2Vec2Model final : public SpeechEncoder {
 public:
  Wav2Vec2Model(const std::string& model_id, const std::filesystem::path& dir);

  const ModelInfo& info() const override { return info_; }

 protected:
  Transcript ForwardImpl(const Waveform& x, const TapHook* hook) override;

 private:
  Matrix Attention(const EncoderLayer& layer, const Matrix& h) const;
  Matrix FeedForward(const EncoderLayer& layer, const Matrix& h) const;
  void Tap(int index, Matrix& h, const TapHook* hook) const;

  ModelInfo info_;
  bool normalize_input_ = true;
  bool group_norm_features_ = true;
  bool stable_layer_norm_ = false;
  int num_heads_ = 0;

  std::vector<Conv1d> conv_layers_;
  std::vector<LayerNorm> conv_norms_;  // one (group) or one per layer (layer)
  bool has_projection_norm_ = true;
  LayerNorm projection_norm_;
  Linear projection_;
  PositionalConv pos_conv_;
  LayerNorm encoder_norm_;
  std::vector<EncoderLayer> layers_;
  Linear lm_head_;
  CtcVocabulary vocab_;
};

RowMajorMatrix LoadMatrix(const SafeTensors& st, const std::string& name, Eigen::Index rows,
                          Eigen::Index cols) {
  const auto shape = st.Shape(name);
  Eigen::Index count = 1;
  for (auto d : shape) count *= d;
  if (count != rows * cols) {
    throw Error(ErrorCode::kContract,
                fmt::format("tensor '{}' has {} elements, expected {}x{}", name, count, rows, cols));
  }
  const auto data = st.Float(name);
  return Eigen::Map<const RowMajorMatrix>(data.data(), rows, cols);
}

Vector LoadVector(const SafeTensors& st, const std::string& name, Eigen::Index size) {
  return LoadMatrix(st, name, size, 1).col(0);
}

LayerNorm LoadNorm(const SafeTensors& st, const std::string& prefix, Eigen::Index size, float eps) {
  LayerNorm norm;
  norm.gamma = LoadVector(st, prefix + ".weight", size);
  norm.beta = LoadVector(st, prefix + ".bias", size);
  norm.eps = eps;
  return norm;
}

Linear LoadLinear(const SafeTensors& st, const std::string& prefix, Eigen::Index out, Eigen::Index in) {
  return Linear{LoadMatrix(st, prefix + ".weight", out, in), LoadVector(st, prefix + ".bias", out)};
}

Wav2Vec2Model::Wav2Vec2Model(const std::string& model_id, const std::filesystem::path& dir) {
  const Json cfg = ReadJson(dir / "config.json");
  const auto model_type = Get<std::string>(cfg, "model_type", "wav2vec2");
  if (model_type != "wav2vec2" && model_type != "hubert") {
    throw Error(ErrorCode::kContract,
                fmt::format("unsupported model_type '{}' in {}", model_type, dir.string()));
  }
  const std::string prefix = model_type + ".";
  if (Get<std::string>(cfg, "hidden_act", "gelu") != "gelu" ||
      Get<std::string>(cfg, "feat_extract_activation", "gelu") != "gelu") {
    throw Error(ErrorCode::kContract, "only gelu activations are supported");
  }
  if (Get<bool>(cfg, "conv_pos_batch_norm", false)) {
    throw Error(ErrorCode::kContract, "batch-normalized positional convolution is not supported");
  }

  const int hidden = Require<int>(cfg, "hidden_size");
  const int num_layers = Require<int>(cfg, "num_hidden_layers");
  num_heads_ = Require<int>(cfg, "num_attention_heads");
  const int intermediate = Require<int>(cfg, "intermediate_size");
  const auto eps = static_cast<float>(Get<double>(cfg, "layer_norm_eps", 1e-5));
  const auto conv_dim = Require<std::vector<int>>(cfg, "conv_dim");
  const auto conv_kernel = Require<std::vector<int>>(cfg, "conv_kernel");
  const auto conv_stride = Require<std::vector<int>>(cfg, "conv_stride");
  const bool conv_bias = Get<bool>(cfg, "conv_bias", false);
  const auto feat_norm = Get<std::string>(cfg, "feat_extract_norm", "group");
  stable_layer_norm_ = Get<bool>(cfg, "do_stable_layer_norm", false);
  group_norm_features_ = feat_norm == "group";
  if (feat_norm != "group" && feat_norm != "layer") {
    throw Error(ErrorCode::kContract, fmt::format("unknown feat_extract_norm '{}'", feat_norm));
  }
  if (conv_dim.size() != conv_kernel.size() || conv_dim.size() != conv_stride.size() || conv_dim.empty()) {
    throw Error(ErrorCode::kContract, "conv_dim, conv_kernel and conv_stride disagree in length");
  }
  if (hidden % num_heads_ != 0) throw Error(ErrorCode::kContract, "hidden_size not divisible by heads");
  const int vocab_size = Require<int>(cfg, "vocab_size");

  const auto checkpoint = dir / "model.safetensors";
  if (!std::filesystem::exists(checkpoint)) {
    throw Error(ErrorCode::kLoad, fmt::format("{} has no model.safetensors", dir.string()));
  }
  const SafeTensors st = SafeTensors::Open(checkpoint.string());

  int in_channels = 1;
  for (std::size_t i = 0; i < conv_dim.size(); ++i) {
    const std::string p = fmt::format("{}feature_extractor.conv_layers.{}", prefix, i);
    Conv1d conv;
    conv.in_channels = in_channels;
    conv.kernel = conv_kernel[i];
    conv.stride = conv_stride[i];
    conv.weight = LoadMatrix(st, p + ".conv.weight", conv_dim[i],
                             static_cast<Eigen::Index>(in_channels) * conv_kernel[i]);
    if (conv_bias) conv.bias = LoadVector(st, p + ".conv.bias", conv_dim[i]);
    conv_layers_.push_back(std::move(conv));
    if (!group_norm_features_ || i == 0) {
      conv_norms_.push_back(LoadNorm(st, p + ".layer_norm", conv_dim[i], 1e-5f));
    }
    in_channels = conv_dim[i];
  }

  has_projection_norm_ =
      model_type == "wav2vec2" || Get<bool>(cfg, "feat_proj_layer_norm", true);
  if (has_projection_norm_) {
    projection_norm_ = LoadNorm(st, prefix + "feature_projection.layer_norm", in_channels, eps);
  }
  projection_ = LoadLinear(st, prefix + "feature_projection.projection", hidden, in_channels);

  pos_conv_.channels = hidden;
  pos_conv_.groups = Require<int>(cfg, "num_conv_pos_embedding_groups");
  pos_conv_.kernel = Require<int>(cfg, "num_conv_pos_embeddings");
  const int per_group = hidden / pos_conv_.groups;
  const std::string pc = prefix + "encoder.pos_conv_embed.conv";
  const Eigen::Index pos_cols = static_cast<Eigen::Index>(per_group) * pos_conv_.kernel;
  RowMajorMatrix pos_weight;  // hidden x (per_group * kernel)
  if (st.Contains(pc + ".weight")) {
    pos_weight = LoadMatrix(st, pc + ".weight", hidden, pos_cols);
  } else {
    // Weight normalization over every dimension but the kernel axis:
    // w[:, :, k] = g[k] * v[:, :, k] / ||v[:, :, k]||.
    std::string g_name = pc + ".weight_g", v_name = pc + ".weight_v";
    if (!st.Contains(g_name)) {
      g_name = pc + ".parametrizations.weight.original0";
      v_name = pc + ".parametrizations.weight.original1";
    }
    const RowMajorMatrix g = LoadMatrix(st, g_name, 1, pos_conv_.kernel);
    pos_weight = LoadMatrix(st, v_name, hidden, pos_cols);
    for (int k = 0; k < pos_conv_.kernel; ++k) {
      double norm = 0.0;
      for (Eigen::Index o = 0; o < hidden; ++o) {
        for (int c = 0; c < per_group; ++c) {
          const double v = pos_weight(o, c * pos_conv_.kernel + k);
          norm += v * v;
        }
      }
      const auto scale = static_cast<float>(g(0, k) / std::sqrt(norm));
      for (Eigen::Index o = 0; o < hidden; ++o) {
        for (int c = 0; c < per_group; ++c) pos_weight(o, c * pos_conv_.kernel + k) *= scale;
      }
    }
  }
  for (int grp = 0; grp < pos_conv_.groups; ++grp) {
    pos_conv_.group_weights.push_back(
        pos_weight.middleRows(static_cast<Eigen::Index>(grp) * per_group, per_group));
  }
  pos_conv_.bias = LoadVector(st, pc + ".bias", hidden);
  encoder_norm_ = LoadNorm(st, prefix + "encoder.layer_norm", hidden, eps);

  for (int l = 0; l < num_layers; ++l) {
    const std::string p = fmt::format("{}encoder.layers.{}", prefix, l);
    EncoderLayer layer;
    layer.q = LoadLinear(st, p + ".attention.q_proj", hidden, hidden);
    layer.k = LoadLinear(st, p + ".attention.k_proj", hidden, hidden);
    layer.v = LoadLinear(st, p + ".attention.v_proj", hidden, hidden);
    layer.out = LoadLinear(st, p + ".attention.out_proj", hidden, hidden);
    layer.attn_norm = LoadNorm(st, p + ".layer_norm", hidden, eps);
    layer.ff_in = LoadLinear(st, p + ".feed_forward.intermediate_dense", intermediate, hidden);
    layer.ff_out = LoadLinear(st, p + ".feed_forward.output_dense", hidden, intermediate);
    layer.final_norm = LoadNorm(st, p + ".final_layer_norm", hidden, eps);
    layers_.push_back(std::move(layer));
  }
  lm_head_ = LoadLinear(st, "lm_head", vocab_size, hidden);

  // Vocabulary: token -> id map; ids must cover [0, vocab_size).
  const Json vocab_json = ReadJson(dir / "vocab.json");
  vocab_.tokens.assign(static_cast<std::size_t>(vocab_size), "");
  for (const auto& [token, id] : vocab_json.items()) {
    const int index = id.get<int>();
    if (index < 0 || index >= vocab_size) {
      throw Error(ErrorCode::kContract, fmt::format("vocab id {} for '{}' out of range", index, token));
    }
    vocab_.tokens[static_cast<std::size_t>(index)] = token;
  }
  vocab_.blank_id = Get<int>(cfg, "pad_token_id", 0);
  vocab_.word_delimiter = "|";
  if (std::filesystem::exists(dir / "tokenizer_config.json")) {
    vocab_.word_delimiter =
        Get<std::string>(ReadJson(dir / "tokenizer_config.json"), "word_delimiter_token", "|");
  }

  if (std::filesystem::exists(dir / "preprocessor_config.json")) {
    const Json pre = ReadJson(dir / "preprocessor_config.json");
    normalize_input_ = Get<bool>(pre, "do_normalize", true);
    info_.expected_sample_rate = Get<int>(pre, "sampling_rate", 16000);
  }

  info_.model_id = model_id;
  info_.num_layers = num_layers;
  info_.width = hidden;
  info_.tap_definition = fmt::format(
      "{}: tap 0 = feature projection output ({} channels, before positional convolution); "
      "tap i = transformer layer i output{}",
      model_type, hidden, stable_layer_norm_ ? " (final encoder layer norm applied after tap L)" : "");
  info_.vocabulary_note = fmt::format("{} CTC head, {} tokens, greedy decoding, no LM", model_type, vocab_size);
}

void Wav2Vec2Model::Tap(int index, Matrix& h, const TapHook* hook) const {
  if (!hook) return;
  Tensor tensor;
  tensor.frames = static_cast<std::size_t>(h.cols());
  tensor.channels = static_cast<std::size_t>(h.rows());
  tensor.values.assign(h.data(), h.data() + h.size());
  (*hook)(index, tensor);
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    h.data()[i] = static_cast<float>(tensor.values[static_cast<std::size_t>(i)]);
  }
}

Matrix Wav2Vec2Model::Attention(const EncoderLayer& layer, const Matrix& h) const {
  const Eigen::Index hidden = h.rows();
  const Eigen::Index frames = h.cols();
  const Eigen::Index head_dim = hidden / num_heads_;
  const float scaling = 1.0f / std::sqrt(static_cast<float>(head_dim));
  const Matrix q = layer.q(h) * scaling;
  const Matrix k = layer.k(h);
  const Matrix v = layer.v(h);
  Matrix context(hidden, frames);
  for (int head = 0; head < num_heads_; ++head) {
    const Eigen::Index r = head * head_dim;
    // scores(j, i): key j against query i, so each column is one softmax.
    Matrix scores = k.middleRows(r, head_dim).transpose() * q.middleRows(r, head_dim);
    for (Eigen::Index i = 0; i < frames; ++i) {
      auto col = scores.col(i);
      const float max = col.maxCoeff();
      col = (col.array() - max).exp();
      col /= col.sum();
    }
    context.middleRows(r, head_dim).noalias() = v.middleRows(r, head_dim) * scores;
  }
  return layer.out(context);
}

Matrix Wav2Vec2Model::FeedForward(const EncoderLayer& layer, const Matrix& h) const {
  Matrix inner = layer.ff_in(h);
  Gelu(inner);
  return layer.ff_out(inner);
}

Transcript Wav2Vec2Model::ForwardImpl(const Waveform& x, const TapHook* hook) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Matrix h(1, n);
  if (normalize_input_) {
    double mean = 0.0;
    for (double s : x.samples) mean += s;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double s : x.samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(n);
    const double inv = 1.0 / std::sqrt(var + 1e-7);
    for (Eigen::Index i = 0; i < n; ++i) h(0, i) = static_cast<float>((x.samples[static_cast<std::size_t>(i)] - mean) * inv);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) h(0, i) = static_cast<float>(x.samples[static_cast<std::size_t>(i)]);
  }

  for (std::size_t i = 0; i < conv_layers_.size(); ++i) {
    h = conv_layers_[i](h);
    if (group_norm_features_) {
      if (i == 0) {
        // One group per channel: normalize each channel over time.
        const LayerNorm& gn = conv_norms_[0];
        for (Eigen::Index c = 0; c < h.rows(); ++c) {
          auto row = h.row(c);
          const float mean = row.mean();
          const float var = (row.array() - mean).square().mean();
          row = ((row.array() - mean) / std::sqrt(var + gn.eps)) * gn.gamma(c) + gn.beta(c);
        }
      }
    } else {
      conv_norms_[i].Apply(h);
    }
    Gelu(h);
  }

  if (has_projection_norm_) projection_norm_.Apply(h);
  h = projection_(h);
  Tap(0, h, hook);

  Matrix pos = pos_conv_(h);
  Gelu(pos);
  h += pos;
  if (!stable_layer_norm_) encoder_norm_.Apply(h);

  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const EncoderLayer& layer = layers_[l];
    if (stable_layer_norm_) {
      Matrix normed = h;
      layer.attn_norm.Apply(normed);
      h += Attention(layer, normed);
      normed = h;
      layer.final_norm.Apply(normed);
      h += FeedForward(layer, normed);
    } else {
      h += Attention(layer, h);
      layer.attn_norm.Apply(h);
      h += FeedForward(layer, h);
      layer.final_norm.Apply(h);
    }
    Tap(static_cast<int>(l) + 1, h, hook);
  }
  if (stable_layer_norm_) encoder_norm_.Apply(h);

  const Matrix logits = lm_head_(h);  // vocab x frames, column-major = frame-major
  std::vector<float> flat(logits.data(), logits.data() + logits.size());
  return GreedyCtcDecode(flat, static_cast<std::size_t>(logits.cols()), vocab_);
}

}  // namespace

std::unique_ptr<SpeechEncoder> LoadWav2Vec2Checkpoint(const std::string& model_id,
                                                      const std::string& directory) {
  return std::make_unique<Wav2Vec2Model>(model_id, directory);
}

}  // namespace asrprobe::model
