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

#include "core/error.hpp"
#include "metrics/timing.hpp"
#include "metrics/wer.hpp"
#include "model/ctc.hpp"
#include "model/intervention.hpp"
#include "model/model.hpp"
#include "model/synthetic_model.hpp"
#include "test_util.hpp"

namespace asrprobe::model {
namespace {

using testing::MakeSignal;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidInput;
}

TEST(Synthetic, DefaultShape) {
  auto m = LoadModel("synthetic:42");
  EXPECT_EQ(m->info().num_layers, 4);
  EXPECT_EQ(m->info().width, 16);
  EXPECT_EQ(m->info().expected_sample_rate, 16000);
  EXPECT_FALSE(m->info().tap_definition.empty());
}

TEST(Synthetic, ExplicitShape) {
  auto m = LoadModel("synthetic:7:8:64");
  EXPECT_EQ(m->info().num_layers, 8);
  EXPECT_EQ(m->info().width, 64);
}

TEST(Synthetic, BadIdsAreLoadErrors) {
  for (const char* id : {"nonexistent/model", "synthetic:", "synthetic:x", "synthetic:1:0:16", "synthetic:1:4"}) {
    EXPECT_EQ(CodeOf([&] { LoadModel(id); }), ErrorCode::kLoad) << id;
  }
}

TEST(Synthetic, TranscriptIsStableAcrossLoadsAndRuns) {
  const auto x = MakeSignal(8000, "a", 1);
  auto m1 = LoadModel("synthetic:42");
  auto m2 = LoadModel("synthetic:42");
  const auto t1 = Transcribe(*m1, x);
  EXPECT_FALSE(t1.text.empty());
  EXPECT_EQ(t1.text, Transcribe(*m1, x).text);
  EXPECT_EQ(t1.text, Transcribe(*m2, x).text);
  EXPECT_EQ(t1.token_ids, Transcribe(*m2, x).token_ids);
}

TEST(Synthetic, DifferentSeedsGiveDifferentModels) {
  const auto x = MakeSignal(8000, "a", 1);
  EXPECT_NE(Transcribe(*LoadModel("synthetic:1"), x).text, Transcribe(*LoadModel("synthetic:2"), x).text);
}

TEST(Synthetic, EmptyInputIsInvalid) {
  auto m = LoadModel("synthetic:1");
  Waveform empty;
  EXPECT_EQ(CodeOf([&] { Transcribe(*m, empty); }), ErrorCode::kInvalidInput);
}

TEST(Synthetic, SampleRateMismatchIsContractError) {
  auto m = LoadModel("synthetic:1");
  const auto x = MakeSignal(8000, "a", 1, 8000);
  EXPECT_EQ(CodeOf([&] { Transcribe(*m, x); }), ErrorCode::kContract);
}

TEST(Synthetic, ActivationShapesAndDeterminism) {
  auto m = LoadModel("synthetic:3");
  const auto x = MakeSignal(8010, "a", 1);
  const auto [t1, a1] = ForwardCollectActivations(*m, x);
  const auto [t2, a2] = ForwardCollectActivations(*m, x);
  ASSERT_EQ(a1.size(), 5u);
  for (std::size_t i = 0; i < a1.size(); ++i) {
    EXPECT_EQ(a1[i].frames, 8010u / 16);
    EXPECT_EQ(a1[i].channels, 16u);
    EXPECT_EQ(a1[i].values, a2[i].values);
  }
  // Tap 0 is the raw framing of the waveform.
  for (std::size_t i = 0; i < a1[0].values.size(); ++i) ASSERT_EQ(a1[0].values[i], x.samples[i]);
  EXPECT_EQ(t1.text, Transcribe(*m, x).text);
}

TEST(Synthetic, TapZeroSeesTinyInputChanges) {
  auto m = LoadModel("synthetic:3");
  auto x = MakeSignal(4000, "a", 1);
  const auto clean = ForwardCollectActivations(*m, x).second;
  x.samples[100] += 1e-7;
  EXPECT_NE(ForwardCollectActivations(*m, x).second[0].values, clean[0].values);
}

TEST(Intervention, ZeroRhoIsNeutral) {
  auto m = LoadModel("synthetic:5");
  const auto x = MakeSignal(8000, "a", 1);
  const auto [clean_text, clean] = ForwardCollectActivations(*m, x);
  for (auto mode : {InjectionMode::kAdditive, InjectionMode::kMultiplicative}) {
    for (int layer = 0; layer <= 4; ++layer) {
      const auto [text, acts] = ForwardWithInterventionCollect(*m, x, {layer, mode, 0.0, 9});
      EXPECT_EQ(text.text, clean_text.text);
      for (std::size_t i = 0; i < acts.size(); ++i) EXPECT_EQ(acts[i].values, clean[i].values);
    }
  }
}

TEST(Intervention, CausalityAtEveryLayerAndMode) {
  auto m = LoadModel("synthetic:5");
  const auto x = MakeSignal(8000, "a", 1);
  const auto clean = ForwardCollectActivations(*m, x).second;
  for (auto mode : {InjectionMode::kAdditive, InjectionMode::kMultiplicative}) {
    for (int layer = 0; layer <= 4; ++layer) {
      const auto acts = ForwardWithInterventionCollect(*m, x, {layer, mode, 0.5, 1}).second;
      for (int j = 0; j <= 4; ++j) {
        if (j < layer) {
          EXPECT_EQ(acts[j].values, clean[j].values) << "mode " << InjectionModeName(mode) << " layer " << layer;
        } else {
          EXPECT_NE(acts[j].values, clean[j].values) << "mode " << InjectionModeName(mode) << " layer " << layer;
        }
      }
    }
  }
}

TEST(Intervention, MultiplicativeFixesZeroTap) {
  auto m = LoadModel("synthetic:5");
  Waveform zeros;
  zeros.id = "z";
  zeros.samples.assign(4000, 0.0);
  const auto [clean_text, clean] = ForwardCollectActivations(*m, zeros);
  const auto [text, acts] = ForwardWithInterventionCollect(*m, zeros, {0, InjectionMode::kMultiplicative, 1.0, 3});
  EXPECT_EQ(text.text, clean_text.text);
  for (std::size_t i = 0; i < acts.size(); ++i) EXPECT_EQ(acts[i].values, clean[i].values);
}

TEST(Intervention, LayerOutOfRangeIsContractError) {
  auto m = LoadModel("synthetic:5");
  const auto x = MakeSignal(4000, "a", 1);
  EXPECT_EQ(CodeOf([&] { ForwardWithIntervention(*m, x, {5, InjectionMode::kAdditive, 0.1, 0}); }),
            ErrorCode::kContract);
  EXPECT_EQ(CodeOf([&] { ForwardWithIntervention(*m, x, {-1, InjectionMode::kAdditive, 0.1, 0}); }),
            ErrorCode::kContract);
}

TEST(Intervention, LargeNoiseAtLayerZeroRaisesWer) {
  auto m = LoadModel("synthetic:5");
  for (unsigned seed = 1; seed <= 3; ++seed) {
    const auto x = MakeSignal(16000, "u" + std::to_string(seed), seed);
    const auto clean = Transcribe(*m, x).text;
    const auto noisy = ForwardWithIntervention(*m, x, {0, InjectionMode::kAdditive, 10.0, 1}).text;
    EXPECT_GT(metrics::Wer(clean, noisy).wer, 0.0);
  }
}

TEST(Intervention, ModeNames) {
  EXPECT_EQ(ParseInjectionMode("additive"), InjectionMode::kAdditive);
  EXPECT_EQ(ParseInjectionMode("multiplicative"), InjectionMode::kMultiplicative);
  EXPECT_STREQ(InjectionModeName(InjectionMode::kMultiplicative), "multiplicative");
  EXPECT_THROW(ParseInjectionMode("subtractive"), Error);
}

TEST(Timing, RequiresWarmupAndExcludesIt) {
  auto m = LoadModel("synthetic:1");
  const auto x = MakeSignal(4000, "a", 1);
  EXPECT_EQ(CodeOf([&] { metrics::TimedTranscribe(*m, x); }), ErrorCode::kContract);
  metrics::Warmup(*m, x);
  const auto [t, rec] = metrics::TimedTranscribe(*m, x);
  EXPECT_EQ(t.text, Transcribe(*m, x).text);
  EXPECT_GT(rec.wall_seconds, 0.0);
  EXPECT_DOUBLE_EQ(rec.audio_seconds, 0.25);
  EXPECT_EQ(rec.utterance_id, "a");
}

TEST(Ctc, CollapsesRepeatsAndBlanks) {
  CtcVocabulary vocab{{"<pad>", "|", "A", "B", "<unk>"}, 0, "|"};
  const auto t = CollapseCtc({0, 2, 2, 0, 2, 3, 1, 1, 3, 4, 0, 1}, vocab);
  EXPECT_EQ(t.text, "AAB B");
  EXPECT_EQ(t.token_ids, (std::vector<int>{2, 2, 3, 1, 3, 4, 1}));
}

TEST(Ctc, GreedyPicksArgmax) {
  CtcVocabulary vocab{{"_", "|", "X"}, 0, "|"};
  const std::vector<float> logits = {0, 0, 1, /**/ 1, 0, 0, /**/ 0, 0, 2, /**/ 0, 3, 0, /**/ 0, 0, 1};
  EXPECT_EQ(GreedyCtcDecode(logits, 5, vocab).text, "XX X");
}

}  // namespace
}  // namespace asrprobe::model
