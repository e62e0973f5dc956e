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

#include "asrprobe/asrprobe.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "core/error.hpp"
#include "core/version.hpp"
#include "core/wav_io.hpp"
#include "core/waveform.hpp"
#include "metrics/text.hpp"
#include "metrics/timing.hpp"
#include "metrics/wer.hpp"
#include "model/intervention.hpp"
#include "model/model.hpp"
#include "perturb/perturb.hpp"
#include "probes/probes.hpp"
#include "report/figure.hpp"
#include "report/summary.hpp"
#include "runner/config.hpp"
#include "runner/subsample.hpp"
#include "runner/sweep.hpp"

struct asrp_waveform {
  asrprobe::Waveform wave;
};

struct asrp_model {
  std::unique_ptr<asrprobe::model::SpeechEncoder> encoder;
};

struct asrp_activations {
  asrprobe::model::LayerActivations taps;
};

namespace {

using namespace asrprobe;

thread_local std::string g_last_error;

asrp_status Fail(asrp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

asrp_status StatusFor(ErrorCode code) {
  // ErrorCode values are defined to match asrp_status one to one.
  return static_cast<asrp_status>(static_cast<int>(code));
}

// Runs `body`, translating exceptions into status codes.
template <class Fn>
asrp_status Guard(Fn&& body) {
  g_last_error.clear();
  try {
    body();
    return ASRP_OK;
  } catch (const Error& e) {
    return Fail(StatusFor(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ASRP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ASRP_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(ASRP_ERR_INTERNAL, "unknown failure");
  }
}

template <class... Ptrs>
void Require(Ptrs... ptrs) {
  if (((ptrs == nullptr) || ...)) throw Error(ErrorCode::kInvalidInput, "null argument");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void SetString(char** out, const std::string& s) {
  if (out) *out = CopyString(s);
}

asrp_status NewWaveform(Waveform wave, asrp_waveform** out) {
  *out = new asrp_waveform{std::move(wave)};
  return ASRP_OK;
}

runner::ExperimentConfig LoadWithOverrides(const char* path, const asrp_run_overrides* overrides) {
  Require(path);
  auto cfg = runner::LoadConfig(path);
  if (overrides) {
    if (overrides->has_seed) cfg.master_seed = overrides->seed;
    if (overrides->output_dir && *overrides->output_dir) cfg.output_dir = overrides->output_dir;
    if (overrides->workers > 0) cfg.workers = overrides->workers;
  }
  return cfg;
}

}  // namespace

extern "C" {

const char* asrp_version(void) { return kToolkitVersion; }

const char* asrp_status_name(asrp_status status) {
  switch (status) {
    case ASRP_OK: return "ok";
    case ASRP_ERR_NULL_ARGUMENT: return "null-argument";
    case ASRP_ERR_INTERNAL: return "internal";
    default:
      if (status >= ASRP_ERR_INVALID_INPUT && status <= ASRP_ERR_MISSING_POINTS) {
        return ErrorCodeName(static_cast<ErrorCode>(status));
      }
      return "unknown";
  }
}

const char* asrp_last_error(void) { return g_last_error.c_str(); }

void asrp_string_free(char* s) { std::free(s); }

asrp_status asrp_waveform_create(const double* samples, size_t num_samples, int sample_rate, const char* id,
                                 asrp_waveform** out) {
  if (!out || (!samples && num_samples > 0)) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    if (sample_rate <= 0) {
      throw Error(ErrorCode::kInvalidParameter, fmt::format("sample rate {} is not positive", sample_rate));
    }
    Waveform w;
    w.samples.assign(samples, samples + num_samples);
    w.sample_rate = sample_rate;
    w.id = id ? id : "";
    NewWaveform(std::move(w), out);
  });
}

asrp_status asrp_waveform_load_wav(const char* path, const char* id, asrp_waveform** out) {
  if (!path || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    const std::string name = id ? std::string(id) : std::filesystem::path(path).stem().string();
    NewWaveform(ReadWav(path, name), out);
  });
}

asrp_status asrp_waveform_save_wav(const asrp_waveform* x, const char* path, int float32) {
  if (!x || !path) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { WriteWav(path, x->wave, float32 ? WavEncoding::kFloat32 : WavEncoding::kPcm16); });
}

void asrp_waveform_free(asrp_waveform* x) { delete x; }

size_t asrp_waveform_length(const asrp_waveform* x) { return x ? x->wave.size() : 0; }

int asrp_waveform_sample_rate(const asrp_waveform* x) { return x ? x->wave.sample_rate : 0; }

const double* asrp_waveform_samples(const asrp_waveform* x) { return x ? x->wave.samples.data() : nullptr; }

const char* asrp_waveform_id(const asrp_waveform* x) { return x ? x->wave.id.c_str() : ""; }

asrp_status asrp_perturb_white_noise(const asrp_waveform* x, double mix_prob, double sigma, uint64_t seed,
                                     asrp_waveform** out) {
  if (!x || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { NewWaveform(perturb::ApplyWhiteNoise(x->wave, {mix_prob, sigma, seed}), out); });
}

asrp_status asrp_perturb_speed(const asrp_waveform* x, double speed_factor, asrp_waveform** out) {
  if (!x || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { NewWaveform(perturb::ApplySpeedPerturb(x->wave, {speed_factor}), out); });
}

asrp_status asrp_perturb_chunk_drop(const asrp_waveform* x, size_t num_chunks, size_t chunk_len, uint64_t seed,
                                    asrp_waveform** out) {
  if (!x || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { NewWaveform(perturb::ApplyChunkDrop(x->wave, {num_chunks, chunk_len, seed}), out); });
}

asrp_status asrp_speed_factor_from(double value, const char* units, double* out) {
  if (!units || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { *out = perturb::SpeedFactorFrom(value, perturb::ParseSpeedUnits(units)); });
}

asrp_status asrp_model_load(const char* model_id, asrp_model** out) {
  if (!model_id || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { *out = new asrp_model{model::LoadModel(model_id)}; });
}

void asrp_model_free(asrp_model* m) { delete m; }

int asrp_model_num_layers(const asrp_model* m) { return m ? m->encoder->info().num_layers : 0; }

int asrp_model_sample_rate(const asrp_model* m) { return m ? m->encoder->info().expected_sample_rate : 0; }

asrp_status asrp_model_warmup(asrp_model* m, const asrp_waveform* x) {
  if (!m || !x) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { metrics::Warmup(*m->encoder, x->wave); });
}

asrp_status asrp_transcribe(asrp_model* m, const asrp_waveform* x, char** text_out) {
  if (!m || !x || !text_out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { SetString(text_out, model::Transcribe(*m->encoder, x->wave).text); });
}

asrp_status asrp_transcribe_timed(asrp_model* m, const asrp_waveform* x, char** text_out, double* seconds_out) {
  if (!m || !x || !text_out || !seconds_out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    auto [transcript, timing] = metrics::TimedTranscribe(*m->encoder, x->wave);
    *seconds_out = timing.wall_seconds;
    SetString(text_out, transcript.text);
  });
}

asrp_status asrp_transcribe_injected(asrp_model* m, const asrp_waveform* x, const char* mode, int layer,
                                     double rho, uint64_t seed, char** text_out) {
  if (!m || !x || !mode || !text_out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    const auto spec = probes::MakeInjection(model::ParseInjectionMode(mode), layer, rho, seed);
    SetString(text_out, model::ForwardWithIntervention(*m->encoder, x->wave, spec).text);
  });
}

asrp_status asrp_collect_activations(asrp_model* m, const asrp_waveform* x, const char* mode, int layer,
                                     double rho, uint64_t seed, asrp_activations** out, char** text_out) {
  if (!m || !x || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    std::pair<model::Transcript, model::LayerActivations> result;
    if (mode) {
      const auto spec = probes::MakeInjection(model::ParseInjectionMode(mode), layer, rho, seed);
      result = model::ForwardWithInterventionCollect(*m->encoder, x->wave, spec);
    } else {
      result = model::ForwardCollectActivations(*m->encoder, x->wave);
    }
    auto acts = std::make_unique<asrp_activations>();
    acts->taps = std::move(result.second);
    SetString(text_out, result.first.text);
    *out = acts.release();
  });
}

size_t asrp_activations_num_taps(const asrp_activations* acts) { return acts ? acts->taps.size() : 0; }

asrp_status asrp_activations_tap(const asrp_activations* acts, size_t tap, const double** values, size_t* frames,
                                 size_t* channels) {
  if (!acts || !values || !frames || !channels) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    if (tap >= acts->taps.size()) {
      throw Error(ErrorCode::kInvalidParameter,
                  fmt::format("tap {} out of range (0..{})", tap, acts->taps.size() - 1));
    }
    const auto& t = acts->taps[tap];
    *values = t.values.data();
    *frames = t.frames;
    *channels = t.channels;
  });
}

void asrp_activations_free(asrp_activations* acts) { delete acts; }

asrp_status asrp_divergence(asrp_model* m, const asrp_waveform* x, double rho, uint64_t seed, double* dist_out,
                            size_t capacity, size_t* num_taps_out) {
  if (!m || !x || !num_taps_out || (!dist_out && capacity > 0)) {
    return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  }
  return Guard([&] {
    const auto profile = probes::DivergenceProfileFor(*m->encoder, x->wave, rho, seed);
    *num_taps_out = profile.dist.size();
    for (size_t i = 0; i < profile.dist.size() && i < capacity; ++i) dist_out[i] = profile.dist[i];
  });
}

asrp_status asrp_wer(const char* reference, const char* hypothesis, asrp_wer_result* out) {
  if (!reference || !hypothesis || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    const auto w = metrics::Wer(reference, hypothesis);
    *out = {w.substitutions, w.deletions, w.insertions, w.ref_words, w.hyp_words, w.wer};
  });
}

asrp_status asrp_normalize_text(const char* text, char** out) {
  if (!text || !out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { SetString(out, fmt::format("{}", fmt::join(metrics::NormalizeText(text), " "))); });
}

asrp_status asrp_run_experiment(const char* config_path, const asrp_run_overrides* overrides, int resume,
                                asrp_log_fn log, void* user, size_t* points_run, size_t* points_already_done) {
  if (!config_path) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    const auto cfg = LoadWithOverrides(config_path, overrides);
    runner::LogFn sink;
    if (log) sink = [log, user](const std::string& message) { log(message.c_str(), user); };
    const auto outcome = runner::RunExperiment(cfg, resume != 0, sink);
    if (points_run) *points_run = outcome.points_run;
    if (points_already_done) *points_already_done = outcome.points_skipped_as_done;
  });
}

asrp_status asrp_plan_resume(const char* config_path, const asrp_run_overrides* overrides, char** labels_out,
                             size_t* count_out) {
  if (!config_path) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    const auto points = runner::PlanResume(LoadWithOverrides(config_path, overrides));
    std::string labels;
    for (const auto& p : points) labels += p.model_id + " " + p.Label() + "\n";
    if (count_out) *count_out = points.size();
    SetString(labels_out, labels);
  });
}

asrp_status asrp_config_hash(const char* config_path, const asrp_run_overrides* overrides, char** hash_out) {
  if (!config_path || !hash_out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] { SetString(hash_out, runner::ConfigHash(LoadWithOverrides(config_path, overrides))); });
}

asrp_status asrp_subsample(const char* listing_path, size_t count, uint64_t seed, const char* out_path,
                           size_t* written_out) {
  if (!listing_path || !out_path) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    const auto n = runner::SubsampleManifest(listing_path, count, seed, out_path);
    if (written_out) *written_out = n;
  });
}

asrp_status asrp_emit_figure(const asrp_figure_request* request, char** png_out, char** svg_out,
                             char** data_out) {
  if (!request || !request->kind || !request->output_path || (!request->csv_paths && request->num_csv_paths) ||
      (!request->filters && request->num_filters)) {
    return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  }
  return Guard([&] {
    report::FigureSpec spec;
    spec.kind = report::ParseFigureKind(request->kind);
    spec.x_field = request->x_field ? request->x_field : "";
    spec.series_field = request->series_field ? request->series_field : "";
    for (size_t i = 0; i < request->num_csv_paths; ++i) spec.csv_paths.emplace_back(request->csv_paths[i]);
    spec.output_path = request->output_path;
    for (size_t i = 0; i < request->num_filters; ++i) {
      const std::string f = request->filters[i];
      const auto eq = f.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::kInvalidParameter, fmt::format("filter '{}' is not column=value", f));
      }
      spec.filters.emplace_back(f.substr(0, eq), f.substr(eq + 1));
    }
    spec.title = request->title ? request->title : "";
    spec.log_x = request->log_x != 0;
    const auto files = report::EmitFigure(spec);
    SetString(png_out, files.png);
    SetString(svg_out, files.svg);
    SetString(data_out, files.data);
  });
}

asrp_status asrp_export_summary(const char* const* csv_paths, size_t num_csv_paths, char** table_out) {
  if ((!csv_paths && num_csv_paths) || !table_out) return Fail(ASRP_ERR_NULL_ARGUMENT, "null argument");
  return Guard([&] {
    std::vector<std::string> paths(csv_paths, csv_paths + num_csv_paths);
    SetString(table_out, report::ExportSummary(paths).ToText());
  });
}

}  // extern "C"
