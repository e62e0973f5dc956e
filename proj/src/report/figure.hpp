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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace asrprobe::report {

enum class FigureKind { kWerVsParam, kWerVsLayer, kDivergenceVsLayer };

const char* FigureKindName(FigureKind kind);
FigureKind ParseFigureKind(const std::string& name);

struct FigureSpec {
  FigureKind kind = FigureKind::kWerVsParam;
  /// Column plotted on the x axis. Empty picks the kind default ("rho" for
  /// wer-vs-param, "layer" otherwise).
  std::string x_field;
  /// Column that splits rows into series. Empty picks "model_id" for
  /// wer-vs-param and "rho" otherwise.
  std::string series_field;
  std::vector<std::string> csv_paths;
  /// Output stem; a trailing .png, .svg or .tsv is stripped.
  std::string output_path;
  /// Only rows whose column equals the value are plotted.
  std::vector<std::pair<std::string, std::string>> filters;
  std::string title;
  bool log_x = false;
};

struct FigureFiles {
  std::string png;
  std::string svg;
  std::string data;
  std::size_t num_points = 0;
};

/// Renders one raster and one vector figure plus a tab-separated sidecar
/// holding exactly the plotted values as they appear in the CSV. Output is a
/// pure function of the inputs. Throws kMissingPoints, listing every absent
/// (series, x) cell, when the grid is incomplete or nothing is plottable.
FigureFiles EmitFigure(const FigureSpec& spec);

}  // namespace asrprobe::report
