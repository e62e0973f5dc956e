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

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "probes/probes.hpp"
#include "runner/config.hpp"
#include "runner/results.hpp"

namespace asrprobe::runner {

using LogFn = std::function<void(const std::string&)>;

/// Every grid point of `cfg` in execution order: per model, the baseline
/// (e1 and e2a) followed by the grid. `num_layers` is the model's L; e2a
/// layers default to 0..L and are range-checked against it.
std::vector<GridPoint> ExpandGrid(const ExperimentConfig& cfg, int num_layers);

/// Executes sweeps over a loaded manifest with a pool of `cfg.workers`
/// workers. Each worker owns its own model handles; all randomness is keyed
/// by (master seed, utterance id, point parameters), so results do not depend
/// on the worker count or schedule.
class SweepRunner {
 public:
  explicit SweepRunner(ExperimentConfig cfg, LogFn log = {});
  ~SweepRunner();
  SweepRunner(const SweepRunner&) = delete;
  SweepRunner& operator=(const SweepRunner&) = delete;

  const ExperimentConfig& config() const { return cfg_; }
  int NumLayers(const std::string& model_id);
  std::vector<GridPoint> Grid();

  /// Records for the given points (all of them when `points` is empty).
  std::vector<ResultRecord> RunE1Sweep(const std::vector<GridPoint>& points = {});
  std::vector<ResultRecord> RunE2ASweep(const std::vector<GridPoint>& points = {});
  /// One aggregated profile per rho, in grid order.
  std::vector<probes::DivergenceProfile> RunE2BSweep(const std::vector<GridPoint>& points = {});

  /// Runs one point and returns its CSV rows.
  std::vector<ResultRecord> RunPoint(const GridPoint& point);

  /// Per-model metadata for the results sidecar.
  nlohmann::json ModelMetadata();

  std::size_t NumUtterances() const;
  const std::vector<std::string>& IngestionSkips() const;

 private:
  struct Impl;
  ExperimentConfig cfg_;
  LogFn log_;
  std::unique_ptr<Impl> impl_;
};

struct ExperimentOutcome {
  ResultPaths paths;
  std::size_t points_run = 0;
  std::size_t points_skipped_as_done = 0;
};

/// `run`: fresh output directory required (an existing results.csv is an
/// error). `resume`: executes only points with no row under a matching
/// config hash.
ExperimentOutcome RunExperiment(const ExperimentConfig& cfg, bool resume, LogFn log = {});

/// Points a resume would schedule, without running anything.
std::vector<GridPoint> PlanResume(const ExperimentConfig& cfg);

}  // namespace asrprobe::runner
