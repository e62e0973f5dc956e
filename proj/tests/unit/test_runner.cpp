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

#include <filesystem>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "core/error.hpp"
#include "runner/config.hpp"
#include "runner/manifest.hpp"
#include "runner/results.hpp"
#include "runner/subsample.hpp"
#include "runner/sweep.hpp"
#include "test_util.hpp"

namespace asrprobe::runner {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using testing::ScratchDir;
using testing::Slurp;
using testing::WriteCorpus;
using testing::WriteFile;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidInput;
}

json Base(const std::string& experiment, const std::string& manifest, const fs::path& out) {
  return {{"experiment", experiment},
          {"models", {"synthetic:1"}},
          {"manifest", manifest},
          {"output_dir", out.string()},
          {"master_seed", 7}};
}

TEST(Config, UnknownKeyIsConfigError) {
  auto j = Base("e1-white", "m.jsonl", "out");
  j["rho_grd"] = {0.1};
  EXPECT_EQ(CodeOf([&] { ParseConfig(j); }), ErrorCode::kConfig);
}

TEST(Config, IllTypedAndInvalidValues) {
  for (auto [key, value] : std::vector<std::pair<std::string, json>>{
           {"workers", "two"}, {"workers", 0}, {"rho_grid", {-0.1}}, {"missing_audio", "ignore"},
           {"modes", {"subtractive"}}, {"speed_grid", {0.0}}}) {
    auto j = Base(key == "modes" ? "e2a" : (key == "speed_grid" ? "e1-speed" : "e1-white"), "m.jsonl", "out");
    j[key] = value;
    EXPECT_EQ(CodeOf([&] { ParseConfig(j); }), ErrorCode::kConfig) << key;
  }
  auto j = Base("e1-white", "m.jsonl", "out");
  j["rho_grid"] = {1.5};
  EXPECT_EQ(CodeOf([&] { ParseConfig(j); }), ErrorCode::kConfig);
  j = Base("e3", "m.jsonl", "out");
  EXPECT_EQ(CodeOf([&] { ParseConfig(j); }), ErrorCode::kConfig);
  j = Base("e2a", "m.jsonl", "out");
  j["models"] = {"synthetic:1", "synthetic:2"};
  EXPECT_EQ(CodeOf([&] { ParseConfig(j); }), ErrorCode::kConfig);
}

TEST(Config, DefaultsPerExperiment) {
  EXPECT_EQ(ParseConfig(Base("e1-white", "m", "o")).rho_grid, (std::vector<double>{0.0, 0.05, 0.1, 0.2, 0.4}));
  EXPECT_EQ(ParseConfig(Base("e1-speed", "m", "o")).speed_grid, (std::vector<double>{0.8, 0.9, 1.0, 1.1, 1.2}));
  auto pct = Base("e1-speed", "m", "o");
  pct["speed_units"] = "percent";
  EXPECT_EQ(ParseConfig(pct).speed_grid, (std::vector<double>{80, 90, 100, 110, 120}));
  const auto e2a = ParseConfig(Base("e2a", "m", "o"));
  EXPECT_TRUE(e2a.layers.empty());
  EXPECT_EQ(e2a.modes, std::vector<model::InjectionMode>{model::InjectionMode::kAdditive});
  EXPECT_EQ(e2a.workers, 1);
  EXPECT_EQ(e2a.missing_audio, MissingAudioPolicy::kAbort);
}

TEST(Config, ModelsAcceptsSingleString) {
  auto j = Base("e1-white", "m", "o");
  j["models"] = "synthetic:3";
  EXPECT_EQ(ParseConfig(j).models, std::vector<std::string>{"synthetic:3"});
}

TEST(Config, HashIgnoresGridsOutputAndWorkers) {
  const auto base = ParseConfig(Base("e1-white", "m", "o"));
  auto j = Base("e1-white", "m", "elsewhere");
  j["rho_grid"] = {0.0, 0.3};
  j["workers"] = 4;
  EXPECT_EQ(ConfigHash(base), ConfigHash(ParseConfig(j)));
  j["master_seed"] = 8;
  EXPECT_NE(ConfigHash(base), ConfigHash(ParseConfig(j)));
  j = Base("e1-white", "m", "o");
  j["models"] = {"synthetic:2"};
  EXPECT_NE(ConfigHash(base), ConfigHash(ParseConfig(j)));
  j = Base("e1-white", "m", "o");
  j["sigma"] = 0.5;
  EXPECT_NE(ConfigHash(base), ConfigHash(ParseConfig(j)));
  EXPECT_EQ(ConfigHash(base).size(), 64u);
}

TEST(Config, ManifestResolvesAgainstConfigDirectory) {
  const auto dir = ScratchDir("cfg_paths");
  WriteFile(dir / "c.json", Base("e1-white", "sub/m.jsonl", "o").dump());
  EXPECT_EQ(ResolveManifestPath(LoadConfig((dir / "c.json").string())), (dir / "sub/m.jsonl").string());
  WriteFile(dir / "bad.json", "{not json");
  EXPECT_EQ(CodeOf([&] { LoadConfig((dir / "bad.json").string()); }), ErrorCode::kConfig);
}

TEST(Manifest, ReadsEntriesAndResolvesPaths) {
  const auto dir = ScratchDir("manifest_ok");
  const auto manifest = WriteCorpus(dir, 2);
  const auto load = LoadManifest(manifest);
  ASSERT_EQ(load.entries.size(), 2u);
  EXPECT_EQ(load.entries[0].id, "utt0");
  EXPECT_EQ(load.entries[1].sample_rate, 16000);
  EXPECT_TRUE(fs::exists(load.entries[1].audio_path));
  EXPECT_TRUE(load.skipped.empty());
  // Paths are written relative to the manifest.
  EXPECT_EQ(Slurp(manifest).find(dir.string()), std::string::npos);
}

TEST(Manifest, DuplicateIdIsNamed) {
  const auto dir = ScratchDir("manifest_dup");
  WriteFile(dir / "a.wav", "");
  WriteFile(dir / "m.jsonl",
            R"({"id":"x","audio_path":"a.wav","reference":"A","sample_rate":16000})"
            "\n"
            R"({"id":"x","audio_path":"a.wav","reference":"B","sample_rate":16000})"
            "\n");
  try {
    ReadManifestEntries((dir / "m.jsonl").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("'x'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos);
  }
}

TEST(Manifest, MalformedLinesNameTheLine) {
  const auto dir = ScratchDir("manifest_bad");
  for (const std::string line : {R"({"id":"x","audio_path":"a.wav","reference":"A"})",
                                 R"({"id":"x","audio_path":"a.wav","reference":"A","sample_rate":16000,"extra":1})",
                                 R"({"id":"x","audio_path":"a.wav","reference":"...","sample_rate":16000})",
                                 R"(["x"])", "{"}) {
    WriteFile(dir / "m.jsonl", "\n" + line + "\n");
    try {
      ReadManifestEntries((dir / "m.jsonl").string());
      FAIL() << line;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << line;
      EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
    }
  }
}

TEST(Manifest, MissingAudioAbortsOrSkips) {
  const auto dir = ScratchDir("manifest_missing");
  const auto manifest = WriteCorpus(dir, 3);
  fs::remove(dir / "utt1.wav");
  EXPECT_EQ(CodeOf([&] { LoadManifest(manifest, MissingAudioPolicy::kAbort); }), ErrorCode::kIo);
  const auto load = LoadManifest(manifest, MissingAudioPolicy::kSkip);
  ASSERT_EQ(load.entries.size(), 2u);
  ASSERT_EQ(load.skipped.size(), 1u);
  EXPECT_EQ(load.skipped[0].rfind("utt1", 0), 0u);
}

TEST(Subsample, SizeOrderAndDeterminism) {
  std::vector<ManifestEntry> listing;
  for (int i = 0; i < 100; ++i) listing.push_back({"u" + std::to_string(i), "a.wav", "A", 16000});
  const auto a = Subsample(listing, 20, 5);
  const auto b = Subsample(listing, 20, 5);
  const auto c = Subsample(listing, 20, 6);
  ASSERT_EQ(a.size(), 20u);
  std::vector<std::string> ia, ib, ic;
  for (const auto& e : a) ia.push_back(e.id);
  for (const auto& e : b) ib.push_back(e.id);
  for (const auto& e : c) ic.push_back(e.id);
  EXPECT_EQ(ia, ib);
  EXPECT_NE(ia, ic);
  EXPECT_EQ(std::set<std::string>(ia.begin(), ia.end()).size(), 20u);
  // Listing order is preserved.
  for (std::size_t i = 1; i < a.size(); ++i) {
    EXPECT_LT(std::stoi(a[i - 1].id.substr(1)), std::stoi(a[i].id.substr(1)));
  }
  EXPECT_EQ(Subsample(listing, 100, 1).size(), 100u);
  EXPECT_THROW(Subsample(listing, 101, 1), Error);
}

TEST(Subsample, InclusionIsRoughlyUniform) {
  std::vector<ManifestEntry> listing;
  for (int i = 0; i < 10; ++i) listing.push_back({"u" + std::to_string(i), "a.wav", "A", 16000});
  std::vector<int> hits(10, 0);
  const int trials = 4000;
  for (int s = 0; s < trials; ++s) {
    for (const auto& e : Subsample(listing, 3, static_cast<std::uint64_t>(s))) ++hits[std::stoi(e.id.substr(1))];
  }
  // Expected 1200 each; binomial sd ~29.
  for (int h : hits) EXPECT_NEAR(h, 1200, 150);
}

TEST(Results, ColumnsAreFixed) {
  const auto& cols = ResultColumns();
  EXPECT_EQ(cols.front(), "experiment");
  EXPECT_EQ(cols.back(), "config_hash");
  for (const char* c : {"model_id", "point", "wer", "dist", "layer", "rho", "speed_factor", "n_utts",
                        "avg_inference_seconds", "real_time_factor", "master_seed"}) {
    EXPECT_NE(std::find(cols.begin(), cols.end(), c), cols.end()) << c;
  }
  EXPECT_EQ(CsvHeader(), fmt::format("{}\n", fmt::join(cols, ",")));
}

TEST(Results, StripTimingBlanksOnlyTimingColumns) {
  const std::string csv =
      "experiment,avg_inference_seconds,wer,real_time_factor\n"
      "e1-white,0.123,0.5,0.01\n";
  EXPECT_EQ(StripTimingColumns(csv), "experiment,avg_inference_seconds,wer,real_time_factor\ne1-white,,0.5,\n");
}

TEST(GridLabels, AreStable) {
  GridPoint p;
  p.model_id = "m";
  p.mode = model::InjectionMode::kAdditive;
  p.layer = 2;
  p.rho = 0.1;
  EXPECT_EQ(p.Label(), "mode=additive;layer=2;rho=0.1");
  GridPoint b;
  b.baseline = true;
  EXPECT_EQ(b.Label(), "baseline");
}

class Sweep : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(ScratchDir("sweep"));
    manifest_ = new std::string(WriteCorpus(*dir_, 4));
  }
  static void TearDownTestSuite() {
    delete dir_;
    delete manifest_;
  }
  static ExperimentConfig Config(const std::string& experiment, const std::string& out, json extra = json::object()) {
    auto j = Base(experiment, *manifest_, *dir_ / out);
    j.update(extra);
    return ParseConfig(j);
  }
  static fs::path* dir_;
  static std::string* manifest_;
};
fs::path* Sweep::dir_ = nullptr;
std::string* Sweep::manifest_ = nullptr;

TEST_F(Sweep, WhiteNoiseZeroEqualsBaseline) {
  SweepRunner runner(Config("e1-white", "w0", {{"rho_grid", {0.0, 0.5}}}));
  const auto records = runner.RunE1Sweep();
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].point, "baseline");
  EXPECT_EQ(*records[0].wer, 0.0);
  EXPECT_EQ(*records[1].wer, *records[0].wer);
  EXPECT_EQ(records[1].substitutions + records[1].deletions + records[1].insertions, 0u);
  EXPECT_GT(*records[2].wer, 0.0);
  for (const auto& r : records) {
    EXPECT_EQ(r.n_utts, 4u);
    EXPECT_TRUE(r.avg_inference_seconds.has_value());
    EXPECT_GT(*r.real_time_factor, 0.0);
  }
}

TEST_F(Sweep, SpeedUnitAndChunkZeroEqualBaseline) {
  SweepRunner speed(Config("e1-speed", "s1", {{"speed_grid", {1.0}}}));
  auto r = speed.RunE1Sweep();
  EXPECT_EQ(*r[1].wer, *r[0].wer);
  EXPECT_EQ(*r[1].speed_factor, 1.0);
  SweepRunner chunk(Config("e1-chunklen", "c0", {{"chunk_len_grid", {0}}}));
  r = chunk.RunE1Sweep();
  EXPECT_EQ(*r[1].wer, *r[0].wer);
  SweepRunner count(Config("e1-chunkcount", "k0", {{"chunk_count_grid", {0, 40}}, {"chunk_len", 50}}));
  r = count.RunE1Sweep();
  EXPECT_EQ(*r[1].wer, *r[0].wer);
  EXPECT_EQ(*r[2].chunk_count, 40u);
  EXPECT_EQ(*r[2].chunk_len, 50u);
}

TEST_F(Sweep, InfeasibleChunkDropSkipsUtterances) {
  SweepRunner runner(Config("e1-chunkcount", "kinf", {{"chunk_count_grid", {200}}, {"chunk_len", 100}}));
  const auto r = runner.RunE1Sweep();
  EXPECT_EQ(r[1].n_skipped, 4u);
  EXPECT_EQ(r[1].n_utts, 0u);
  EXPECT_FALSE(r[1].wer.has_value());
}

TEST_F(Sweep, E2ARecordCountCoversEveryTap) {
  SweepRunner runner(Config("e2a", "e2a", {{"rho_grid", {0.0, 1.0}}}));
  const auto records = runner.RunE2ASweep();
  // Baseline plus (L + 1) taps x |rho|, L = 4.
  EXPECT_EQ(records.size(), 1u + 5u * 2u);
  for (const auto& r : records) {
    if (r.point == "baseline") continue;
    if (*r.rho == 0.0) {
      EXPECT_EQ(*r.wer, 0.0);
    }
  }
}

TEST_F(Sweep, E2ALayerOutOfRangeIsConfigError) {
  SweepRunner runner(Config("e2a", "e2a_bad", {{"layers", {0, 5}}}));
  EXPECT_EQ(CodeOf([&] { runner.Grid(); }), ErrorCode::kConfig);
}

TEST_F(Sweep, E2BProfileAtZeroIsZero) {
  SweepRunner runner(Config("e2b", "e2b", {{"rho_grid", {0.0, 0.1}}}));
  const auto profiles = runner.RunE2BSweep();
  ASSERT_EQ(profiles.size(), 2u);
  for (double d : profiles[0].dist) EXPECT_EQ(d, 0.0);
  for (double d : profiles[1].dist) EXPECT_GT(d, 0.0);
  EXPECT_EQ(profiles[1].n_utts, 4u);
  EXPECT_EQ(profiles[1].dist.size(), 5u);
}

TEST_F(Sweep, RunWritesCsvAndSidecar) {
  const auto cfg = Config("e2b", "run_e2b", {{"rho_grid", {0.1}}});
  const auto outcome = RunExperiment(cfg, false);
  EXPECT_EQ(outcome.points_run, 1u);
  const auto rows = ReadResultsCsv(outcome.paths.csv);
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].at("layer"), std::to_string(i));
    EXPECT_FALSE(rows[i].at("dist").empty());
    EXPECT_EQ(rows[i].at("config_hash"), ConfigHash(cfg));
    EXPECT_EQ(rows[i].at("master_seed"), "7");
  }
  const auto sidecar = json::parse(Slurp(outcome.paths.sidecar));
  EXPECT_TRUE(sidecar.contains("models"));
  EXPECT_EQ(CodeOf([&] { RunExperiment(cfg, false); }), ErrorCode::kConfig);
}

TEST_F(Sweep, ResumeRunsOnlyMissingPoints) {
  auto cfg = Config("e1-white", "resume", {{"rho_grid", {0.0, 0.2}}});
  EXPECT_EQ(RunExperiment(cfg, false).points_run, 3u);
  const auto csv_before = Slurp(PathsFor(cfg.output_dir).csv);

  EXPECT_TRUE(PlanResume(cfg).empty());
  auto again = RunExperiment(cfg, true);
  EXPECT_EQ(again.points_run, 0u);
  EXPECT_EQ(again.points_skipped_as_done, 3u);
  EXPECT_EQ(Slurp(PathsFor(cfg.output_dir).csv), csv_before);

  auto extended = Config("e1-white", "resume", {{"rho_grid", {0.0, 0.2, 0.3}}});
  const auto plan = PlanResume(extended);
  ASSERT_EQ(plan.size(), 1u);
  EXPECT_EQ(plan[0].Label(), "rho=0.3");
  EXPECT_EQ(RunExperiment(extended, true).points_run, 1u);
  EXPECT_EQ(ReadResultsCsv(PathsFor(cfg.output_dir).csv).size(), 4u);

  auto reseeded = Config("e1-white", "resume", {{"rho_grid", {0.0, 0.2}}, {"master_seed", 8}});
  EXPECT_EQ(CodeOf([&] { RunExperiment(reseeded, true); }), ErrorCode::kHashMismatch);
}

TEST_F(Sweep, ResultsIndependentOfWorkerCount) {
  auto one = Config("e1-white", "det1", {{"rho_grid", {0.1, 0.3}}, {"workers", 1}});
  auto four = Config("e1-white", "det4", {{"rho_grid", {0.1, 0.3}}, {"workers", 4}});
  RunExperiment(one, false);
  RunExperiment(four, false);
  EXPECT_EQ(StripTimingColumns(Slurp(PathsFor(one.output_dir).csv)),
            StripTimingColumns(Slurp(PathsFor(four.output_dir).csv)));
}

TEST_F(Sweep, SkipPolicyRecordsSkippedUtterances) {
  const auto dir = ScratchDir("sweep_skip");
  const auto manifest = WriteCorpus(dir, 3);
  fs::remove(dir / "utt2.wav");
  auto j = Base("e1-white", manifest, dir / "out");
  j["rho_grid"] = {0.0};
  j["missing_audio"] = "skip";
  SweepRunner runner(ParseConfig(j));
  const auto r = runner.RunE1Sweep();
  EXPECT_EQ(r[0].n_utts, 2u);
  EXPECT_EQ(runner.IngestionSkips().size(), 1u);
}

}  // namespace
}  // namespace asrprobe::runner
