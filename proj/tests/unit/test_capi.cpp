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

// Exercises the shared library through its public header only.

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "asrprobe/asrprobe.h"

namespace {

namespace fs = std::filesystem;

fs::path Scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("asrprobe_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<double> Tone(std::size_t n, double f) {
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = 0.3 * std::sin(2.0 * M_PI * f * i / 16000.0) * std::sin(2.0 * M_PI * 3.0 * i / 16000.0);
  return s;
}

struct Owned {
  char* s = nullptr;
  ~Owned() { asrp_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

asrp_waveform* Make(std::size_t n, double f, const char* id) {
  const auto s = Tone(n, f);
  asrp_waveform* w = nullptr;
  EXPECT_EQ(asrp_waveform_create(s.data(), s.size(), 16000, id, &w), ASRP_OK);
  return w;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(asrp_version(), "");
  EXPECT_STREQ(asrp_status_name(ASRP_OK), "ok");
  EXPECT_STRNE(asrp_status_name(ASRP_ERR_HASH_MISMATCH), asrp_status_name(ASRP_ERR_CONFIG));
}

TEST(CApi, NullArgumentsAreRejected) {
  asrp_waveform* w = nullptr;
  EXPECT_EQ(asrp_waveform_create(nullptr, 10, 16000, "x", &w), ASRP_ERR_NULL_ARGUMENT);
  EXPECT_EQ(asrp_model_load(nullptr, nullptr), ASRP_ERR_NULL_ARGUMENT);
  EXPECT_STRNE(asrp_last_error(), "");
}

TEST(CApi, WaveformRoundTripThroughWav) {
  const auto dir = Scratch("wav");
  asrp_waveform* w = Make(1600, 440.0, "tone");
  const auto path = (dir / "t.wav").string();
  ASSERT_EQ(asrp_waveform_save_wav(w, path.c_str(), 1), ASRP_OK);
  asrp_waveform* back = nullptr;
  ASSERT_EQ(asrp_waveform_load_wav(path.c_str(), nullptr, &back), ASRP_OK);
  EXPECT_STREQ(asrp_waveform_id(back), "t");
  ASSERT_EQ(asrp_waveform_length(back), 1600u);
  EXPECT_EQ(asrp_waveform_sample_rate(back), 16000);
  for (std::size_t i = 0; i < 1600; ++i) {
    EXPECT_NEAR(asrp_waveform_samples(back)[i], asrp_waveform_samples(w)[i], 1e-7);
  }
  asrp_waveform* missing = nullptr;
  EXPECT_EQ(asrp_waveform_load_wav((dir / "none.wav").c_str(), nullptr, &missing), ASRP_ERR_IO);
  asrp_waveform_free(w);
  asrp_waveform_free(back);
}

TEST(CApi, Perturbations) {
  asrp_waveform* w = Make(16000, 300.0, "u");
  asrp_waveform* out = nullptr;
  ASSERT_EQ(asrp_perturb_white_noise(w, 0.0, 1.0, 1, &out), ASRP_OK);
  for (std::size_t i = 0; i < 16000; ++i) ASSERT_EQ(asrp_waveform_samples(out)[i], asrp_waveform_samples(w)[i]);
  asrp_waveform_free(out);

  ASSERT_EQ(asrp_perturb_speed(w, 2.0, &out), ASRP_OK);
  EXPECT_EQ(asrp_waveform_length(out), 8000u);
  EXPECT_STREQ(asrp_waveform_id(out), "u");
  asrp_waveform_free(out);

  ASSERT_EQ(asrp_perturb_chunk_drop(w, 3, 100, 1, &out), ASRP_OK);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < 16000; ++i) zeros += asrp_waveform_samples(out)[i] == 0.0;
  EXPECT_GE(zeros, 300u);
  asrp_waveform_free(out);

  EXPECT_EQ(asrp_perturb_chunk_drop(w, 200, 100, 1, &out), ASRP_ERR_INFEASIBLE_DROP);
  EXPECT_EQ(asrp_perturb_white_noise(w, 1.5, 1.0, 1, &out), ASRP_ERR_INVALID_PARAMETER);
  EXPECT_EQ(asrp_perturb_speed(w, 0.0, &out), ASRP_ERR_INVALID_PARAMETER);

  double factor = 0.0;
  ASSERT_EQ(asrp_speed_factor_from(90.0, "percent", &factor), ASRP_OK);
  EXPECT_DOUBLE_EQ(factor, 0.9);
  ASSERT_EQ(asrp_speed_factor_from(80.0, "inverse-percent", &factor), ASRP_OK);
  EXPECT_DOUBLE_EQ(factor, 1.25);
  EXPECT_EQ(asrp_speed_factor_from(1.0, "furlongs", &factor), ASRP_ERR_INVALID_PARAMETER);
  asrp_waveform_free(w);
}

TEST(CApi, ModelInferenceAndProbes) {
  asrp_model* m = nullptr;
  ASSERT_EQ(asrp_model_load("synthetic:4", &m), ASRP_OK);
  EXPECT_EQ(asrp_model_num_layers(m), 4);
  EXPECT_EQ(asrp_model_sample_rate(m), 16000);
  asrp_waveform* w = Make(8000, 250.0, "u");

  Owned clean, injected, zero;
  ASSERT_EQ(asrp_transcribe(m, w, &clean.s), ASRP_OK);
  ASSERT_EQ(asrp_transcribe_injected(m, w, "additive", 2, 0.0, 1, &zero.s), ASRP_OK);
  EXPECT_EQ(zero.str(), clean.str());
  ASSERT_EQ(asrp_transcribe_injected(m, w, "additive", 0, 10.0, 1, &injected.s), ASRP_OK);
  EXPECT_NE(injected.str(), clean.str());
  char* bad = nullptr;
  EXPECT_EQ(asrp_transcribe_injected(m, w, "additive", 9, 0.1, 1, &bad), ASRP_ERR_CONTRACT);
  EXPECT_EQ(asrp_transcribe_injected(m, w, "sideways", 0, 0.1, 1, &bad), ASRP_ERR_INVALID_PARAMETER);

  double seconds = 0.0;
  Owned timed;
  EXPECT_EQ(asrp_transcribe_timed(m, w, &timed.s, &seconds), ASRP_ERR_CONTRACT);
  ASSERT_EQ(asrp_model_warmup(m, w), ASRP_OK);
  ASSERT_EQ(asrp_transcribe_timed(m, w, &timed.s, &seconds), ASRP_OK);
  EXPECT_EQ(timed.str(), clean.str());
  EXPECT_GT(seconds, 0.0);

  asrp_activations* acts = nullptr;
  ASSERT_EQ(asrp_collect_activations(m, w, nullptr, 0, 0.0, 0, &acts, nullptr), ASRP_OK);
  ASSERT_EQ(asrp_activations_num_taps(acts), 5u);
  const double* values = nullptr;
  std::size_t frames = 0, channels = 0;
  ASSERT_EQ(asrp_activations_tap(acts, 0, &values, &frames, &channels), ASRP_OK);
  EXPECT_EQ(frames, 500u);
  EXPECT_EQ(channels, 16u);
  EXPECT_EQ(values[17], asrp_waveform_samples(w)[17]);
  EXPECT_EQ(asrp_activations_tap(acts, 5, &values, &frames, &channels), ASRP_ERR_INVALID_PARAMETER);
  asrp_activations_free(acts);

  std::vector<double> dist(8, -1.0);
  std::size_t taps = 0;
  ASSERT_EQ(asrp_divergence(m, w, 0.1, 3, dist.data(), dist.size(), &taps), ASRP_OK);
  EXPECT_EQ(taps, 5u);
  EXPECT_NEAR(dist[0], 0.1, 0.01);
  EXPECT_EQ(dist[5], -1.0);

  asrp_waveform* empty = nullptr;
  ASSERT_EQ(asrp_waveform_create(nullptr, 0, 16000, "e", &empty), ASRP_OK);
  Owned none;
  EXPECT_EQ(asrp_transcribe(m, empty, &none.s), ASRP_ERR_INVALID_INPUT);
  asrp_waveform_free(empty);

  asrp_model* missing = nullptr;
  EXPECT_EQ(asrp_model_load("nonexistent/model", &missing), ASRP_ERR_LOAD);
  EXPECT_EQ(missing, nullptr);
  asrp_waveform_free(w);
  asrp_model_free(m);
}

TEST(CApi, WerAndNormalization) {
  asrp_wer_result r{};
  ASSERT_EQ(asrp_wer("A B C D", "A X C", &r), ASRP_OK);
  EXPECT_EQ(r.substitutions, 1u);
  EXPECT_EQ(r.deletions, 1u);
  EXPECT_EQ(r.ref_words, 4u);
  EXPECT_EQ(r.hyp_words, 3u);
  EXPECT_DOUBLE_EQ(r.wer, 0.5);
  EXPECT_EQ(asrp_wer("", "A", &r), ASRP_ERR_UNDEFINED_WER);
  Owned norm;
  ASSERT_EQ(asrp_normalize_text("Hello,  world!", &norm.s), ASRP_OK);
  EXPECT_EQ(norm.str(), "HELLO WORLD");
}

void Collect(const char* message, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(message); }

TEST(CApi, ExperimentResumeAndReports) {
  const auto dir = Scratch("run");
  asrp_model* m = nullptr;
  ASSERT_EQ(asrp_model_load("synthetic:1", &m), ASRP_OK);
  std::ofstream manifest(dir / "m.jsonl");
  for (int i = 0; i < 3; ++i) {
    const std::string id = "u" + std::to_string(i);
    asrp_waveform* w = Make(8000 + 800 * i, 200.0 + 50 * i, id.c_str());
    ASSERT_EQ(asrp_waveform_save_wav(w, (dir / (id + ".wav")).c_str(), 1), ASRP_OK);
    Owned text;
    ASSERT_EQ(asrp_transcribe(m, w, &text.s), ASRP_OK);
    manifest << R"({"id":")" << id << R"(","audio_path":")" << id << R"(.wav","reference":")"
             << (text.str().empty() ? "E" : text.str()) << R"(","sample_rate":16000})" << '\n';
    asrp_waveform_free(w);
  }
  manifest.close();
  asrp_model_free(m);
  std::ofstream(dir / "c.json") << R"({"experiment":"e1-white","models":["synthetic:1"],"manifest":"m.jsonl",)"
                                << R"("output_dir":"out","master_seed":3,"rho_grid":[0.0,0.2]})";
  const auto config = (dir / "c.json").string();
  const auto out = (dir / "out").string();
  asrp_run_overrides overrides{0, 0, out.c_str(), 2};

  std::vector<std::string> log;
  std::size_t run = 0, done = 0;
  ASSERT_EQ(asrp_run_experiment(config.c_str(), &overrides, 0, Collect, &log, &run, &done), ASRP_OK)
      << asrp_last_error();
  EXPECT_EQ(run, 3u);
  EXPECT_EQ(done, 0u);
  EXPECT_EQ(log.size(), 3u);
  EXPECT_EQ(asrp_run_experiment(config.c_str(), &overrides, 0, nullptr, nullptr, &run, &done), ASRP_ERR_CONFIG);

  Owned labels;
  std::size_t count = 99;
  ASSERT_EQ(asrp_plan_resume(config.c_str(), &overrides, &labels.s, &count), ASRP_OK);
  EXPECT_EQ(count, 0u);
  ASSERT_EQ(asrp_run_experiment(config.c_str(), &overrides, 1, nullptr, nullptr, &run, &done), ASRP_OK);
  EXPECT_EQ(run, 0u);
  EXPECT_EQ(done, 3u);

  Owned h1, h2;
  ASSERT_EQ(asrp_config_hash(config.c_str(), &overrides, &h1.s), ASRP_OK);
  asrp_run_overrides reseed{1, 4, out.c_str(), 1};
  ASSERT_EQ(asrp_config_hash(config.c_str(), &reseed, &h2.s), ASRP_OK);
  EXPECT_NE(h1.str(), h2.str());
  EXPECT_EQ(asrp_run_experiment(config.c_str(), &reseed, 1, nullptr, nullptr, &run, &done), ASRP_ERR_HASH_MISMATCH);

  const auto csv = (dir / "out" / "results.csv").string();
  const char* paths[] = {csv.c_str()};
  const auto stem = (dir / "fig").string();
  asrp_figure_request req{"wer-vs-param", nullptr, nullptr, paths, 1, stem.c_str(), nullptr, 0, "white", 0};
  Owned png, svg, data;
  ASSERT_EQ(asrp_emit_figure(&req, &png.s, &svg.s, &data.s), ASRP_OK) << asrp_last_error();
  EXPECT_TRUE(fs::exists(png.str()));
  EXPECT_TRUE(fs::exists(svg.str()));
  EXPECT_TRUE(fs::exists(data.str()));
  req.kind = "scatter";
  EXPECT_EQ(asrp_emit_figure(&req, nullptr, nullptr, nullptr), ASRP_ERR_INVALID_PARAMETER);

  Owned table;
  ASSERT_EQ(asrp_export_summary(paths, 1, &table.s), ASRP_OK);
  EXPECT_NE(table.str().find("synthetic:1"), std::string::npos);
  EXPECT_NE(table.str().find("# master_seed 3"), std::string::npos);

  std::size_t written = 0;
  ASSERT_EQ(asrp_subsample((dir / "m.jsonl").c_str(), 2, 5, (dir / "sub" / "s.jsonl").c_str(), &written), ASRP_OK)
      << asrp_last_error();
  EXPECT_EQ(written, 2u);
}

}  // namespace
