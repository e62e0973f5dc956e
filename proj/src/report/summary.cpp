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

#include "report/summary.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "core/error.hpp"
#include "report/csv_table.hpp"

namespace asrprobe::report {

namespace {

struct Timing {
  double weighted_seconds = 0.0;
  double weighted_rtf = 0.0;
  double utterances = 0.0;
  std::size_t rtf_utterances = 0;
};

const char* ParamField(const std::string& experiment) {
  if (experiment == "e1-white") return "rho";
  if (experiment == "e1-speed") return "speed";
  if (experiment == "e1-chunklen") return "chunk_len";
  if (experiment == "e1-chunkcount") return "chunk_count";
  return nullptr;
}

std::string Num(double v) { return fmt::format("{:.4g}", v); }

void PerturbationFindings(const Table& table, std::vector<std::string>& findings) {
  // (experiment, model) -> [(param text, wer)]
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<std::string, double>>> groups;
  for (const auto& row : table.rows) {
    const auto experiment = TextField(row, "experiment");
    const char* field = ParamField(experiment);
    if (!field || TextField(row, "point") == "baseline") continue;
    const auto wer = NumberField(row, "wer");
    if (!wer || TextField(row, field).empty()) continue;
    groups[{experiment, TextField(row, "model_id")}].emplace_back(TextField(row, field), *wer);
  }
  for (const auto& [key, points] : groups) {
    auto lo = std::min_element(points.begin(), points.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    auto hi = std::max_element(points.begin(), points.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
    const char* field = ParamField(key.first);
    findings.push_back(fmt::format("{} {}: WER lowest at {}={} ({}), highest at {}={} ({})", key.first, key.second,
                                   field, lo->first, Num(lo->second), field, hi->first, Num(hi->second)));
  }
}

void InjectionFindings(const Table& table, const std::map<std::string, double>& baselines,
                       std::vector<std::string>& findings) {
  struct Cell {
    int layer;
    double rho;
    double wer;
  };
  std::map<std::pair<std::string, std::string>, std::vector<Cell>> groups;
  for (const auto& row : table.rows) {
    if (TextField(row, "experiment") != "e2a" || TextField(row, "point") == "baseline") continue;
    const auto layer = NumberField(row, "layer");
    const auto rho = NumberField(row, "rho");
    const auto wer = NumberField(row, "wer");
    if (!layer || !rho || !wer || *rho <= 0.0) continue;
    groups[{TextField(row, "model_id"), TextField(row, "mode")}].push_back(
        {static_cast<int>(*layer), *rho, *wer});
  }
  for (const auto& [key, cells] : groups) {
    const auto worst = *std::max_element(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
      return a.wer < b.wer || (a.wer == b.wer && a.layer > b.layer);
    });
    std::string line = fmt::format("e2a {} {}: most sensitive layer {} (WER {} at rho={})", key.first,
                                   key.second, worst.layer, Num(worst.wer), Num(worst.rho));
    auto base = baselines.find(key.first);
    if (base != baselines.end()) {
      std::set<int> above;
      for (const auto& c : cells) {
        if (c.rho == worst.rho && c.wer > base->second) above.insert(c.layer);
      }
      line += fmt::format("; baseline {}; layers above baseline at rho={}: {}", Num(base->second), Num(worst.rho),
                          above.empty() ? std::string("none") : fmt::format("{}", fmt::join(above, ",")));
    }
    findings.push_back(std::move(line));
  }
}

void DivergenceFindings(const Table& table, std::vector<std::string>& findings) {
  std::map<std::pair<std::string, double>, std::map<int, double>> groups;
  for (const auto& row : table.rows) {
    if (TextField(row, "experiment") != "e2b") continue;
    const auto layer = NumberField(row, "layer");
    const auto rho = NumberField(row, "rho");
    const auto dist = NumberField(row, "dist");
    if (!layer || !rho || !dist) continue;
    groups[{TextField(row, "model_id"), *rho}][static_cast<int>(*layer)] = *dist;
  }
  for (const auto& [key, by_layer] : groups) {
    if (by_layer.size() < 2) continue;
    std::size_t decreasing = 0;
    for (auto it = std::next(by_layer.begin()); it != by_layer.end(); ++it) {
      if (it->second < std::prev(it)->second) ++decreasing;
    }
    const auto& first = *by_layer.begin();
    const auto& last = *by_layer.rbegin();
    const auto peak = *std::max_element(by_layer.begin(), by_layer.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    const char* trend = last.second < first.second ? "shrinks" : last.second > first.second ? "grows" : "is flat";
    findings.push_back(fmt::format(
        "e2b {} rho={}: divergence {} with depth ({} at tap {} -> {} at tap {}; {} of {} steps decreasing; "
        "peak {} at tap {})",
        key.first, Num(key.second), trend, Num(first.second), first.first, Num(last.second), last.first,
        decreasing, by_layer.size() - 1, Num(peak.second), peak.first));
  }
}

}  // namespace

std::string Summary::ToText() const {
  std::string out = "model_id\tbaseline_wer\tmean_inference_seconds\tmean_real_time_factor\ttimed_utterances";
  if (has_ratio) out += "\ttime_ratio";
  out += '\n';
  auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.6g}", *v) : std::string(); };
  for (const auto& m : models) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}", m.model_id, opt(m.baseline_wer), opt(m.mean_inference_seconds),
                       opt(m.mean_real_time_factor), m.timed_utterances);
    if (has_ratio) out += "\t" + opt(m.time_ratio);
    out += '\n';
  }
  out += fmt::format("# master_seed {}\n", master_seed);
  for (const auto& f : findings) out += "# " + f + '\n';
  return out;
}

Summary ExportSummary(const std::vector<std::string>& csv_paths) {
  const Table table = LoadTables(csv_paths);
  for (const char* column : {"avg_inference_seconds", "real_time_factor", "master_seed", "config_hash",
                             "model_id", "experiment", "wer", "point", "n_utts"}) {
    if (!table.HasColumn(column)) {
      throw Error(ErrorCode::kContract, fmt::format("results lack the '{}' column", column));
    }
  }
  if (table.rows.empty()) throw Error(ErrorCode::kInvalidInput, "results contain no rows");

  Summary summary;
  std::set<std::string> seeds;
  std::map<std::pair<std::string, std::string>, std::string> hashes;
  std::vector<std::string> order;
  std::map<std::string, double> baselines;
  std::map<std::string, Timing> timings;

  for (const auto& row : table.rows) {
    seeds.insert(TextField(row, "master_seed"));
    const auto model = TextField(row, "model_id");
    const auto experiment = TextField(row, "experiment");
    const auto hash = TextField(row, "config_hash");
    auto [it, fresh] = hashes.emplace(std::make_pair(experiment, model), hash);
    if (!fresh && it->second != hash) {
      throw Error(ErrorCode::kContract,
                  fmt::format("{} results for {} come from two configurations ({} and {})", experiment, model,
                              it->second.substr(0, 12), hash.substr(0, 12)));
    }
    if (std::find(order.begin(), order.end(), model) == order.end()) order.push_back(model);
    if (TextField(row, "point") == "baseline") {
      if (const auto wer = NumberField(row, "wer")) baselines.emplace(model, *wer);
    }
    const auto seconds = NumberField(row, "avg_inference_seconds");
    const auto n = NumberField(row, "n_utts");
    if (seconds && n && *n > 0) {
      auto& t = timings[model];
      t.weighted_seconds += *seconds * *n;
      t.utterances += *n;
      if (const auto rtf = NumberField(row, "real_time_factor")) {
        t.weighted_rtf += *rtf * *n;
        t.rtf_utterances += static_cast<std::size_t>(*n);
      }
    }
  }
  if (seeds.size() > 1) {
    throw Error(ErrorCode::kContract,
                fmt::format("results mix master seeds {}; summarize one seed at a time", fmt::join(seeds, ", ")));
  }
  summary.master_seed = std::stoull(*seeds.begin());

  std::optional<std::size_t> reference;
  for (const auto& model : order) {
    ModelSummary m;
    m.model_id = model;
    if (auto b = baselines.find(model); b != baselines.end()) m.baseline_wer = b->second;
    if (auto t = timings.find(model); t != timings.end()) {
      m.mean_inference_seconds = t->second.weighted_seconds / t->second.utterances;
      m.timed_utterances = static_cast<std::size_t>(t->second.utterances);
      if (t->second.rtf_utterances > 0) {
        m.mean_real_time_factor = t->second.weighted_rtf / static_cast<double>(t->second.rtf_utterances);
      }
      if (!reference) reference = summary.models.size();
    }
    summary.models.push_back(std::move(m));
  }

  const auto timed = std::count_if(summary.models.begin(), summary.models.end(),
                                   [](const ModelSummary& m) { return m.mean_inference_seconds.has_value(); });
  summary.has_ratio = timed >= 2;
  if (summary.has_ratio) {
    const ModelSummary& ref = summary.models[*reference];
    for (auto& m : summary.models) {
      if (!m.mean_inference_seconds) continue;
      m.time_ratio = *m.mean_inference_seconds / *ref.mean_inference_seconds;
      if (&m == &ref) continue;
      const double pct = (*m.time_ratio - 1.0) * 100.0;
      summary.findings.push_back(fmt::format("timing: {} is {:.1f}% {} than {} ({:.4g} s vs {:.4g} s per utterance)",
                                             m.model_id, std::abs(pct), pct >= 0 ? "slower" : "faster",
                                             ref.model_id, *m.mean_inference_seconds,
                                             *ref.mean_inference_seconds));
    }
  }
  PerturbationFindings(table, summary.findings);
  InjectionFindings(table, baselines, summary.findings);
  DivergenceFindings(table, summary.findings);
  return summary;
}

}  // namespace asrprobe::report
