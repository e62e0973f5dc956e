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

// Command-line front end. Talks to the toolkit only through the C API.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asrprobe/asrprobe.h"

namespace {

// Owns a string returned by the library.
struct LibString {
  char* ptr = nullptr;
  ~LibString() { asrp_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

int Check(asrp_status status) {
  if (status == ASRP_OK) return 0;
  std::fprintf(stderr, "asrprobe: %s error: %s\n", asrp_status_name(status), asrp_last_error());
  return 1;
}

struct RunFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 0;
  bool quiet = false;

  asrp_run_overrides Overrides() const {
    asrp_run_overrides o{};
    o.has_seed = seed.has_value();
    o.seed = seed.value_or(0);
    o.output_dir = out.empty() ? nullptr : out.c_str();
    o.workers = workers;
    return o;
  }
};

void AddRunFlags(CLI::App* cmd, RunFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Override master_seed");
  cmd->add_option("--out", flags.out, "Override output_dir");
  cmd->add_option("--workers", flags.workers, "Override workers")->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet,-q", flags.quiet, "Suppress progress messages");
}

void LogToStderr(const char* message, void*) { std::fprintf(stderr, "%s\n", message); }

int RunOrResume(const RunFlags& flags, bool resume) {
  const auto overrides = flags.Overrides();
  size_t ran = 0;
  size_t done = 0;
  const int rc = Check(asrp_run_experiment(flags.config.c_str(), &overrides, resume ? 1 : 0,
                                           flags.quiet ? nullptr : &LogToStderr, nullptr, &ran, &done));
  if (rc == 0) std::printf("points run: %zu, already present: %zu\n", ran, done);
  return rc;
}

struct WaveHandle {
  asrp_waveform* ptr = nullptr;
  ~WaveHandle() { asrp_waveform_free(ptr); }
};

struct ModelHandle {
  asrp_model* ptr = nullptr;
  ~ModelHandle() { asrp_model_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-robustness measurement for layered speech recognizers"};
  app.set_version_flag("--version", std::string(asrp_version()));
  app.require_subcommand(1);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run an experiment into a fresh output directory");
  AddRunFlags(run, run_flags);

  RunFlags resume_flags;
  bool dry_run = false;
  auto* resume = app.add_subcommand("resume", "Run only the grid points missing from existing results");
  AddRunFlags(resume, resume_flags);
  resume->add_flag("--dry-run", dry_run, "List the points a resume would run");

  RunFlags hash_flags;
  auto* hash = app.add_subcommand("hash", "Print the config hash recorded with results");
  AddRunFlags(hash, hash_flags);

  std::string listing;
  std::string sub_out;
  std::size_t sub_count = 20;
  std::uint64_t sub_seed = 0;
  auto* subsample = app.add_subcommand("subsample", "Draw a seeded subset of a manifest-format listing");
  subsample->add_option("--listing", listing, "Split listing (JSON Lines manifest)")
      ->required()
      ->check(CLI::ExistingFile);
  subsample->add_option("--count", sub_count, "Number of utterances")->capture_default_str();
  subsample->add_option("--seed", sub_seed, "Sampling seed")->capture_default_str();
  subsample->add_option("--out", sub_out, "Output manifest path")->required();

  auto* report = app.add_subcommand("report", "Figures and summary tables from results CSVs");
  report->require_subcommand(1);

  std::string fig_kind = "wer-vs-param";
  std::string fig_x;
  std::string fig_series;
  std::vector<std::string> fig_csv;
  std::string fig_out;
  std::vector<std::string> fig_filters;
  std::string fig_title;
  bool fig_log_x = false;
  auto* figure = report->add_subcommand("figure", "Emit one PNG, one SVG and a TSV data sidecar");
  figure->add_option("--kind", fig_kind, "wer-vs-param | wer-vs-layer | divergence-vs-layer")
      ->capture_default_str();
  figure->add_option("--x", fig_x, "x-axis column (default: rho, or layer for layer kinds)");
  figure->add_option("--series", fig_series, "Series column (default: model_id, or rho for layer kinds)");
  figure->add_option("--csv", fig_csv, "Results CSV (repeatable)")->required()->check(CLI::ExistingFile);
  figure->add_option("--out", fig_out, "Output path stem")->required();
  figure->add_option("--filter", fig_filters, "Keep rows with column=value (repeatable)");
  figure->add_option("--title", fig_title, "Figure title");
  figure->add_flag("--log-x", fig_log_x, "Logarithmic x axis");

  std::vector<std::string> sum_csv;
  std::string sum_out;
  auto* summary = report->add_subcommand("summary", "Per-model timing, baseline WER and findings");
  summary->add_option("--csv", sum_csv, "Results CSV (repeatable)")->required()->check(CLI::ExistingFile);
  summary->add_option("--out", sum_out, "Write the table here instead of stdout");

  std::string tr_model;
  std::string tr_wav;
  std::string tr_mode;
  int tr_layer = 0;
  double tr_rho = 0.0;
  std::uint64_t tr_seed = 0;
  auto* transcribe = app.add_subcommand("transcribe", "Transcribe one WAV file");
  transcribe->add_option("--model", tr_model, "Model id")->required();
  transcribe->add_option("--wav", tr_wav, "Mono WAV file")->required()->check(CLI::ExistingFile);
  transcribe->add_option("--inject", tr_mode, "Injection mode: additive | multiplicative");
  transcribe->add_option("--layer", tr_layer, "Injection tap")->capture_default_str();
  transcribe->add_option("--rho", tr_rho, "Injection scale")->capture_default_str();
  transcribe->add_option("--seed", tr_seed, "Injection seed")->capture_default_str();

  std::string pt_wav;
  std::string pt_out;
  std::optional<double> pt_white;
  double pt_sigma = 1.0;
  std::optional<double> pt_speed;
  std::vector<std::size_t> pt_chunks;
  std::uint64_t pt_seed = 0;
  auto* perturb = app.add_subcommand("perturb", "Apply one waveform perturbation to a WAV file");
  perturb->add_option("--wav", pt_wav, "Input mono WAV")->required()->check(CLI::ExistingFile);
  perturb->add_option("--out", pt_out, "Output WAV (32-bit float)")->required();
  auto* white_opt = perturb->add_option("--white", pt_white, "White-noise mixing probability");
  perturb->add_option("--sigma", pt_sigma, "White-noise standard deviation")->capture_default_str();
  auto* speed_opt = perturb->add_option("--speed", pt_speed, "Speed factor (output lasts 1/factor)");
  auto* chunk_opt = perturb->add_option("--chunk-drop", pt_chunks, "Chunk count and length")->expected(2);
  perturb->add_option("--seed", pt_seed, "Perturbation seed")->capture_default_str();
  white_opt->excludes(speed_opt)->excludes(chunk_opt);
  speed_opt->excludes(chunk_opt);

  CLI11_PARSE(app, argc, argv);

  if (*run) return RunOrResume(run_flags, false);
  if (*resume) {
    if (!dry_run) return RunOrResume(resume_flags, true);
    const auto overrides = resume_flags.Overrides();
    LibString labels;
    size_t count = 0;
    if (int rc = Check(asrp_plan_resume(resume_flags.config.c_str(), &overrides, &labels.ptr, &count))) return rc;
    std::printf("%s%zu point(s) remaining\n", labels.str().c_str(), count);
    return 0;
  }
  if (*hash) {
    const auto overrides = hash_flags.Overrides();
    LibString h;
    if (int rc = Check(asrp_config_hash(hash_flags.config.c_str(), &overrides, &h.ptr))) return rc;
    std::printf("%s\n", h.str().c_str());
    return 0;
  }
  if (*subsample) {
    size_t written = 0;
    if (int rc = Check(asrp_subsample(listing.c_str(), sub_count, sub_seed, sub_out.c_str(), &written))) return rc;
    std::printf("wrote %zu entries to %s\n", written, sub_out.c_str());
    return 0;
  }
  if (*figure) {
    std::vector<const char*> csv;
    for (const auto& c : fig_csv) csv.push_back(c.c_str());
    std::vector<const char*> filters;
    for (const auto& f : fig_filters) filters.push_back(f.c_str());
    asrp_figure_request req{};
    req.kind = fig_kind.c_str();
    req.x_field = fig_x.c_str();
    req.series_field = fig_series.c_str();
    req.csv_paths = csv.data();
    req.num_csv_paths = csv.size();
    req.output_path = fig_out.c_str();
    req.filters = filters.data();
    req.num_filters = filters.size();
    req.title = fig_title.c_str();
    req.log_x = fig_log_x ? 1 : 0;
    LibString png, svg, data;
    if (int rc = Check(asrp_emit_figure(&req, &png.ptr, &svg.ptr, &data.ptr))) return rc;
    std::printf("%s\n%s\n%s\n", png.str().c_str(), svg.str().c_str(), data.str().c_str());
    return 0;
  }
  if (*summary) {
    std::vector<const char*> csv;
    for (const auto& c : sum_csv) csv.push_back(c.c_str());
    LibString table;
    if (int rc = Check(asrp_export_summary(csv.data(), csv.size(), &table.ptr))) return rc;
    if (sum_out.empty()) {
      std::fputs(table.str().c_str(), stdout);
      return 0;
    }
    std::FILE* f = std::fopen(sum_out.c_str(), "wb");
    if (!f || std::fputs(table.str().c_str(), f) < 0) {
      std::fprintf(stderr, "asrprobe: cannot write %s\n", sum_out.c_str());
      if (f) std::fclose(f);
      return 1;
    }
    std::fclose(f);
    return 0;
  }
  if (*transcribe) {
    ModelHandle model;
    WaveHandle wave;
    if (int rc = Check(asrp_model_load(tr_model.c_str(), &model.ptr))) return rc;
    if (int rc = Check(asrp_waveform_load_wav(tr_wav.c_str(), nullptr, &wave.ptr))) return rc;
    LibString text;
    const asrp_status status =
        tr_mode.empty()
            ? asrp_transcribe(model.ptr, wave.ptr, &text.ptr)
            : asrp_transcribe_injected(model.ptr, wave.ptr, tr_mode.c_str(), tr_layer, tr_rho, tr_seed, &text.ptr);
    if (int rc = Check(status)) return rc;
    std::printf("%s\n", text.str().c_str());
    return 0;
  }
  if (*perturb) {
    WaveHandle in;
    WaveHandle out;
    if (int rc = Check(asrp_waveform_load_wav(pt_wav.c_str(), nullptr, &in.ptr))) return rc;
    asrp_status status;
    if (pt_white) {
      status = asrp_perturb_white_noise(in.ptr, *pt_white, pt_sigma, pt_seed, &out.ptr);
    } else if (pt_speed) {
      status = asrp_perturb_speed(in.ptr, *pt_speed, &out.ptr);
    } else if (pt_chunks.size() == 2) {
      status = asrp_perturb_chunk_drop(in.ptr, pt_chunks[0], pt_chunks[1], pt_seed, &out.ptr);
    } else {
      std::fprintf(stderr, "asrprobe: choose one of --white, --speed or --chunk-drop\n");
      return 2;
    }
    if (int rc = Check(status)) return rc;
    return Check(asrp_waveform_save_wav(out.ptr, pt_out.c_str(), 1));
  }
  return 0;
}
