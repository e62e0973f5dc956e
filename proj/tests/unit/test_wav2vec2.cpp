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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "core/error.hpp"
#include "core/wav_io.hpp"
#include "metrics/text.hpp"
#include "model/model.hpp"
#include "model/registry.hpp"
#include "test_util.hpp"

namespace asrprobe::model {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kFixtures = ASRPROBE_FIXTURE_DIR;

json Expected(const std::string& name) {
  std::ifstream in(kFixtures / (name + ".expected.json"));
  return json::parse(in);
}

Waveform Input(const std::string& name) { return ReadWav((kFixtures / (name + ".wav")).string(), name); }

std::string Joined(const std::string& text) {
  std::string out;
  for (const auto& w : metrics::NormalizeText(text)) out += (out.empty() ? "" : " ") + w;
  return out;
}

class Checkpoint : public ::testing::TestWithParam<std::string> {};

TEST_P(Checkpoint, LoadsWithReportedDepth) {
  const auto expected = Expected(GetParam());
  auto m = LoadModel((kFixtures / GetParam()).string());
  EXPECT_EQ(m->info().num_layers, expected["num_layers"].get<int>());
  EXPECT_EQ(m->info().width, 32);
  EXPECT_EQ(m->info().expected_sample_rate, 16000);
}

TEST_P(Checkpoint, TapsMatchReferenceImplementation) {
  const auto expected = Expected(GetParam());
  auto m = LoadModel((kFixtures / GetParam()).string());
  const auto acts = ForwardCollectActivations(*m, Input(GetParam())).second;
  const auto& taps = expected["taps"];
  ASSERT_EQ(acts.size(), taps.size());
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const auto& ref = taps[i];
    ASSERT_EQ(acts[i].frames, ref.size()) << "tap " << i;
    ASSERT_EQ(acts[i].channels, ref[0].size()) << "tap " << i;
    double scale = 0.0;
    for (const auto& row : ref) {
      for (double v : row) scale = std::max(scale, std::abs(v));
    }
    double worst = 0.0;
    for (std::size_t t = 0; t < acts[i].frames; ++t) {
      for (std::size_t c = 0; c < acts[i].channels; ++c) {
        worst = std::max(worst, std::abs(acts[i].values[t * acts[i].channels + c] - ref[t][c].get<double>()));
      }
    }
    EXPECT_LE(worst, 1e-4 * scale) << "tap " << i;
  }
}

TEST_P(Checkpoint, DecodingMatchesReferenceImplementation) {
  const auto expected = Expected(GetParam());
  auto m = LoadModel((kFixtures / GetParam()).string());
  const auto t = Transcribe(*m, Input(GetParam()));
  std::vector<int> collapsed;
  int prev = -1;
  for (int id : expected["frame_ids"].get<std::vector<int>>()) {
    if (id != prev && id != 0) collapsed.push_back(id);
    prev = id;
  }
  EXPECT_EQ(t.token_ids, collapsed);
  EXPECT_EQ(Joined(t.text), Joined(expected["text"].get<std::string>()));
}

TEST_P(Checkpoint, ResolvesThroughCacheDirectory) {
  ::setenv(kModelCacheEnv, kFixtures.c_str(), 1);
  EXPECT_EQ(ResolveCheckpointDir(GetParam()), (kFixtures / GetParam()).string());
  auto m = LoadModel(GetParam());
  EXPECT_EQ(m->info().model_id, GetParam());
  ::unsetenv(kModelCacheEnv);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Checkpoint, ::testing::Values("tiny-wav2vec2", "tiny-hubert"),
                         [](const auto& info) { return info.param == "tiny-hubert" ? "Hubert" : "Wav2Vec2"; });

fs::path CopyFixture(const std::string& name, const std::string& scratch) {
  const auto dir = testing::ScratchDir(scratch) / name;
  fs::copy(kFixtures / name, dir, fs::copy_options::recursive);
  return dir;
}

ErrorCode LoadError(const fs::path& dir) {
  try {
    LoadModel(dir.string());
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return ErrorCode::kInvalidInput;
}

TEST(CheckpointErrors, ShapeMismatchIsContractError) {
  const auto dir = CopyFixture("tiny-wav2vec2", "ckpt_shape");
  std::ifstream in(dir / "config.json");
  auto cfg = json::parse(in);
  in.close();
  cfg["hidden_size"] = 48;
  testing::WriteFile(dir / "config.json", cfg.dump());
  EXPECT_EQ(LoadError(dir), ErrorCode::kContract);
}

TEST(CheckpointErrors, MissingWeightsIsLoadError) {
  const auto dir = CopyFixture("tiny-hubert", "ckpt_weights");
  fs::remove(dir / "model.safetensors");
  EXPECT_EQ(LoadError(dir), ErrorCode::kLoad);
}

TEST(CheckpointErrors, TruncatedWeightsAreRejected) {
  const auto dir = CopyFixture("tiny-hubert", "ckpt_trunc");
  const auto bytes = testing::Slurp(dir / "model.safetensors");
  testing::WriteFile(dir / "model.safetensors", bytes.substr(0, bytes.size() / 2));
  const auto code = LoadError(dir);
  EXPECT_TRUE(code == ErrorCode::kLoad || code == ErrorCode::kContract);
}

TEST(CheckpointErrors, UnknownIdIsLoadError) {
  ::setenv(kModelCacheEnv, kFixtures.c_str(), 1);
  try {
    LoadModel("nonexistent/model");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLoad);
  }
  ::unsetenv(kModelCacheEnv);
}

}  // namespace
}  // namespace asrprobe::model
