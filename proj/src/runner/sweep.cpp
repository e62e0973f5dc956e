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

#include "runner/sweep.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "core/wav_io.hpp"
#include "metrics/text.hpp"
#include "metrics/timing.hpp"
#include "metrics/wer.hpp"
#include "model/intervention.hpp"
#include "perturb/perturb.hpp"
#include "perturb/resample.hpp"
#include "runner/manifest.hpp"

namespace asrprobe::runner {

namespace fs = std::filesystem;

namespace {

struct Utterance {
  Waveform audio;
  std::vector<std::string> reference;
};

/// What one utterance contributed to a point.
struct UttResult {
  bool skipped = false;
  metrics::WerBreakdown wer;
  double wall_seconds = 0.0;
  double audio_seconds = 0.0;
};

struct WorkerContext {
  std::map<std::string, std::unique_ptr<model::SpeechEncoder>> models;
};

}  // namespace

struct SweepRunner::Impl {
  std::vector<WorkerContext> workers;
  std::vector<Utterance> utterances;
  std::vector<std::string> ingestion_skips;
  bool loaded = false;

  /// Runs fn(worker, index) for index in [0, n) on the pool. Exceptions from
  /// any worker are rethrown (the first one wins) after all threads join.
  template <class Fn>
  void ParallelFor(std::size_t n, Fn&& fn) {
    if (workers.size() == 1 || n <= 1) {
      for (std::size_t i = 0; i < n; ++i) fn(workers.front(), i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    for (auto& worker : workers) {
      threads.emplace_back([&, ctx = &worker] {
        try {
          for (std::size_t i = next++; i < n; i = next++) fn(*ctx, i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
  }
};

SweepRunner::SweepRunner(ExperimentConfig cfg, LogFn log)
    : cfg_(std::move(cfg)), log_(std::move(log)), impl_(std::make_unique<Impl>()) {
  impl_->workers.resize(static_cast<std::size_t>(cfg_.workers));
}

SweepRunner::~SweepRunner() = default;

namespace {

model::SpeechEncoder& ModelFor(WorkerContext& ctx, const std::string& model_id) {
  auto it = ctx.models.find(model_id);
  if (it == ctx.models.end()) it = ctx.models.emplace(model_id, model::LoadModel(model_id)).first;
  return *it->second;
}

}  // namespace

int SweepRunner::NumLayers(const std::string& model_id) {
  return ModelFor(impl_->workers.front(), model_id).info().num_layers;
}

std::vector<GridPoint> SweepRunner::Grid() {
  std::vector<GridPoint> all;
  for (const auto& id : cfg_.models) {
    ExperimentConfig single = cfg_;
    single.models = {id};
    auto points = ExpandGrid(single, NumLayers(id));
    all.insert(all.end(), points.begin(), points.end());
  }
  return all;
}

std::vector<GridPoint> ExpandGrid(const ExperimentConfig& cfg, int num_layers) {
  std::vector<GridPoint> points;
  for (const auto& id : cfg.models) {
    auto base = [&] {
      GridPoint p;
      p.model_id = id;
      return p;
    };
    if (cfg.experiment != ExperimentKind::kE2B) {
      GridPoint p = base();
      p.baseline = true;
      points.push_back(p);
    }
    switch (cfg.experiment) {
      case ExperimentKind::kE1White:
        for (double rho : cfg.rho_grid) {
          GridPoint p = base();
          p.rho = rho;
          points.push_back(p);
        }
        break;
      case ExperimentKind::kE1Speed:
        for (double s : cfg.speed_grid) {
          GridPoint p = base();
          p.speed = s;
          points.push_back(p);
        }
        break;
      case ExperimentKind::kE1ChunkLen:
        for (std::size_t l : cfg.chunk_len_grid) {
          GridPoint p = base();
          p.chunk_count = cfg.chunk_count;
          p.chunk_len = l;
          points.push_back(p);
        }
        break;
      case ExperimentKind::kE1ChunkCount:
        for (std::size_t k : cfg.chunk_count_grid) {
          GridPoint p = base();
          p.chunk_count = k;
          p.chunk_len = cfg.chunk_len;
          points.push_back(p);
        }
        break;
      case ExperimentKind::kE2A: {
        std::vector<int> layers = cfg.layers;
        if (layers.empty()) {
          for (int l = 0; l <= num_layers; ++l) layers.push_back(l);
        }
        for (int l : layers) {
          if (l < 0 || l > num_layers) {
            throw Error(ErrorCode::kConfig,
                        fmt::format("layer {} outside [0, {}] for model {}", l, num_layers, id));
          }
        }
        for (auto mode : cfg.modes) {
          for (int l : layers) {
            for (double rho : cfg.rho_grid) {
              GridPoint p = base();
              p.mode = mode;
              p.layer = l;
              p.rho = rho;
              points.push_back(p);
            }
          }
        }
        break;
      }
      case ExperimentKind::kE2B:
        for (double rho : cfg.rho_grid) {
          GridPoint p = base();
          p.rho = rho;
          points.push_back(p);
        }
        break;
    }
  }
  return points;
}

namespace {

void LoadUtterances(const ExperimentConfig& cfg, int model_rate, std::vector<Utterance>* out,
                    std::vector<std::string>* skips, const LogFn& log) {
  ManifestLoad load = LoadManifest(ResolveManifestPath(cfg), cfg.missing_audio);
  *skips = load.skipped;
  for (const auto& entry : load.entries) {
    Utterance utt;
    try {
      utt.audio = ReadWav(entry.audio_path, entry.id);
      if (utt.audio.sample_rate != entry.sample_rate) {
        throw Error(ErrorCode::kParse,
                    fmt::format("'{}' is {} Hz but the manifest says {} Hz", entry.audio_path,
                                utt.audio.sample_rate, entry.sample_rate));
      }
      if (utt.audio.samples.empty()) {
        throw Error(ErrorCode::kInvalidInput, fmt::format("'{}' holds no samples", entry.audio_path));
      }
    } catch (const Error& e) {
      if (cfg.missing_audio == MissingAudioPolicy::kAbort) throw;
      skips->push_back(fmt::format("{}: {}", entry.id, e.what()));
      continue;
    }
    if (utt.audio.sample_rate != model_rate && cfg.resample_input) {
      utt.audio.samples = perturb::ResampleRate(utt.audio.samples, utt.audio.sample_rate, model_rate);
      utt.audio.sample_rate = model_rate;
    }
    utt.reference = metrics::NormalizeText(entry.reference);
    out->push_back(std::move(utt));
  }
  for (const auto& s : *skips) {
    if (log) log(fmt::format("skipped at ingestion: {}", s));
  }
  if (out->empty()) throw Error(ErrorCode::kInvalidInput, "manifest yields no usable utterances");
}

perturb::PerturbationSpec PerturbationFor(const ExperimentConfig& cfg, const GridPoint& p) {
  if (p.baseline) return perturb::IdentitySpec{};
  switch (cfg.experiment) {
    case ExperimentKind::kE1White:
      return perturb::WhiteNoiseSpec{*p.rho, cfg.sigma, cfg.master_seed};
    case ExperimentKind::kE1Speed:
      return perturb::SpeedSpec{perturb::SpeedFactorFrom(*p.speed, cfg.speed_units)};
    case ExperimentKind::kE1ChunkLen:
    case ExperimentKind::kE1ChunkCount:
      return perturb::ChunkDropSpec{*p.chunk_count, *p.chunk_len, cfg.master_seed};
    default:
      break;
  }
  return perturb::IdentitySpec{};
}

ResultRecord Summarize(const ExperimentConfig& cfg, const GridPoint& p,
                       const std::vector<UttResult>& results) {
  ResultRecord r;
  r.experiment = ExperimentKindName(cfg.experiment);
  r.model_id = p.model_id;
  r.point = p.Label();
  r.master_seed = cfg.master_seed;
  r.config_hash = ConfigHash(cfg);
  if (p.mode) r.mode = model::InjectionModeName(*p.mode);
  r.layer = p.layer;
  r.rho = p.rho;
  if (cfg.experiment == ExperimentKind::kE1White && !p.baseline) r.sigma = cfg.sigma;
  if (p.speed) {
    r.speed = p.speed;
    r.speed_factor = perturb::SpeedFactorFrom(*p.speed, cfg.speed_units);
  }
  r.chunk_count = p.chunk_count;
  r.chunk_len = p.chunk_len;

  double wall = 0.0, audio = 0.0, wer_sum = 0.0;
  for (const auto& u : results) {
    if (u.skipped) {
      ++r.n_skipped;
      continue;
    }
    ++r.n_utts;
    r.substitutions += u.wer.substitutions;
    r.deletions += u.wer.deletions;
    r.insertions += u.wer.insertions;
    r.ref_words += u.wer.ref_words;
    wer_sum += u.wer.wer;
    wall += u.wall_seconds;
    audio += u.audio_seconds;
  }
  if (r.n_utts > 0) {
    r.wer = static_cast<double>(r.substitutions + r.deletions + r.insertions) /
            static_cast<double>(r.ref_words);
    r.wer_utt_mean = wer_sum / static_cast<double>(r.n_utts);
    r.avg_inference_seconds = wall / static_cast<double>(r.n_utts);
    r.real_time_factor = wall / audio;
  }
  return r;
}

}  // namespace

std::size_t SweepRunner::NumUtterances() const { return impl_->utterances.size(); }

const std::vector<std::string>& SweepRunner::IngestionSkips() const { return impl_->ingestion_skips; }

nlohmann::json SweepRunner::ModelMetadata() {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& id : cfg_.models) {
    const auto& info = ModelFor(impl_->workers.front(), id).info();
    models[id] = {{"num_layers", info.num_layers},
                  {"width", info.width},
                  {"expected_sample_rate", info.expected_sample_rate},
                  {"tap_definition", info.tap_definition},
                  {"vocabulary", info.vocabulary_note}};
  }
  return models;
}

std::vector<ResultRecord> SweepRunner::RunPoint(const GridPoint& point) {
  if (!impl_->loaded) {
    int rate = 0;
    for (const auto& id : cfg_.models) {
      const int r = ModelFor(impl_->workers.front(), id).info().expected_sample_rate;
      if (rate != 0 && r != rate) {
        throw Error(ErrorCode::kConfig, "models in one sweep must share an input sample rate");
      }
      rate = r;
    }
    LoadUtterances(cfg_, rate, &impl_->utterances, &impl_->ingestion_skips, log_);
    impl_->loaded = true;
  }
  const auto& utts = impl_->utterances;

  auto acquire = [&](WorkerContext& ctx) -> model::SpeechEncoder& {
    model::SpeechEncoder& m = ModelFor(ctx, point.model_id);
    if (!m.warmed_up()) metrics::Warmup(m, utts.front().audio);
    return m;
  };

  if (cfg_.experiment == ExperimentKind::kE2B) {
    std::vector<probes::DivergenceProfile> profiles(utts.size());
    impl_->ParallelFor(utts.size(), [&](WorkerContext& ctx, std::size_t i) {
      profiles[i] = probes::DivergenceProfileFor(ModelFor(ctx, point.model_id), utts[i].audio,
                                                 *point.rho, cfg_.master_seed);
    });
    const auto aggregate = probes::AggregateDivergence(profiles);
    std::vector<ResultRecord> rows;
    for (std::size_t tap = 0; tap < aggregate.dist.size(); ++tap) {
      ResultRecord r = Summarize(cfg_, point, {});
      r.layer = static_cast<int>(tap);
      r.dist = aggregate.dist[tap];
      r.n_utts = aggregate.n_utts;
      rows.push_back(std::move(r));
    }
    return rows;
  }

  std::vector<UttResult> results(utts.size());
  if (IsE1(cfg_.experiment)) {
    const auto spec = PerturbationFor(cfg_, point);
    impl_->ParallelFor(utts.size(), [&](WorkerContext& ctx, std::size_t i) {
      Waveform perturbed;
      try {
        perturbed = perturb::Apply(utts[i].audio, spec);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInfeasibleDrop) throw;
        results[i].skipped = true;
        return;
      }
      model::SpeechEncoder& m = acquire(ctx);
      auto [transcript, timing] = metrics::TimedTranscribe(m, perturbed);
      results[i].wer = metrics::WerWords(utts[i].reference, metrics::NormalizeText(transcript.text));
      results[i].wall_seconds = timing.wall_seconds;
      results[i].audio_seconds = timing.audio_seconds;
    });
  } else {
    impl_->ParallelFor(utts.size(), [&](WorkerContext& ctx, std::size_t i) {
      model::SpeechEncoder& m = acquire(ctx);
      const Waveform& x = utts[i].audio;
      auto run = [&] {
        if (point.baseline) return model::Transcribe(m, x);
        return model::ForwardWithIntervention(
            m, x, probes::MakeInjection(*point.mode, *point.layer, *point.rho, cfg_.master_seed));
      };
      auto [transcript, timing] = metrics::TimeCall(m, x, run);
      results[i].wer = metrics::WerWords(utts[i].reference, metrics::NormalizeText(transcript.text));
      results[i].wall_seconds = timing.wall_seconds;
      results[i].audio_seconds = timing.audio_seconds;
    });
  }
  ResultRecord record = Summarize(cfg_, point, results);
  if (record.n_skipped > 0 && log_) {
    log_(fmt::format("{} {}: skipped {} utterance(s) with infeasible parameters", point.model_id,
                     point.Label(), record.n_skipped));
  }
  return {record};
}

std::vector<ResultRecord> SweepRunner::RunE1Sweep(const std::vector<GridPoint>& points) {
  if (!IsE1(cfg_.experiment)) throw Error(ErrorCode::kConfig, "not an e1 experiment");
  std::vector<ResultRecord> out;
  for (const auto& p : points.empty() ? Grid() : points) {
    auto rows = RunPoint(p);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<ResultRecord> SweepRunner::RunE2ASweep(const std::vector<GridPoint>& points) {
  if (cfg_.experiment != ExperimentKind::kE2A) throw Error(ErrorCode::kConfig, "not an e2a experiment");
  std::vector<ResultRecord> out;
  for (const auto& p : points.empty() ? Grid() : points) {
    auto rows = RunPoint(p);
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<probes::DivergenceProfile> SweepRunner::RunE2BSweep(const std::vector<GridPoint>& points) {
  if (cfg_.experiment != ExperimentKind::kE2B) throw Error(ErrorCode::kConfig, "not an e2b experiment");
  std::vector<probes::DivergenceProfile> out;
  for (const auto& p : points.empty() ? Grid() : points) {
    const auto rows = RunPoint(p);
    probes::DivergenceProfile profile;
    profile.model_id = p.model_id;
    profile.rho = *p.rho;
    for (const auto& r : rows) profile.dist.push_back(*r.dist);
    profile.n_utts = rows.empty() ? 0 : rows.front().n_utts;
    out.push_back(std::move(profile));
  }
  return out;
}

ExperimentOutcome RunExperiment(const ExperimentConfig& cfg, bool resume, LogFn log) {
  const ResultPaths paths = PathsFor(cfg.output_dir);
  if (!resume && fs::exists(paths.csv)) {
    throw Error(ErrorCode::kConfig,
                fmt::format("'{}' already exists; use resume or choose another output directory",
                            paths.csv));
  }
  SweepRunner runner(cfg, log);
  const auto grid = runner.Grid();
  const auto todo = resume ? RemainingPoints(cfg, grid) : grid;

  ExperimentOutcome outcome;
  outcome.paths = PrepareResults(cfg, runner.ModelMetadata());
  outcome.points_skipped_as_done = grid.size() - todo.size();
  for (const auto& point : todo) {
    if (log) log(fmt::format("[{}/{}] {} {}", outcome.points_run + 1, todo.size(), point.model_id, point.Label()));
    AppendResults(outcome.paths, runner.RunPoint(point));
    ++outcome.points_run;
  }
  return outcome;
}

std::vector<GridPoint> PlanResume(const ExperimentConfig& cfg) {
  SweepRunner runner(cfg);
  return RemainingPoints(cfg, runner.Grid());
}

}  // namespace asrprobe::runner
