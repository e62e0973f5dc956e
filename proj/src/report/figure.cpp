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

#include "report/figure.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "core/error.hpp"
#include "report/canvas.hpp"
#include "report/csv_table.hpp"

namespace asrprobe::report {

namespace fs = std::filesystem;

const char* FigureKindName(FigureKind kind) {
  switch (kind) {
    case FigureKind::kWerVsParam: return "wer-vs-param";
    case FigureKind::kWerVsLayer: return "wer-vs-layer";
    case FigureKind::kDivergenceVsLayer: return "divergence-vs-layer";
  }
  return "?";
}

FigureKind ParseFigureKind(const std::string& name) {
  for (auto kind : {FigureKind::kWerVsParam, FigureKind::kWerVsLayer, FigureKind::kDivergenceVsLayer}) {
    if (name == FigureKindName(kind)) return kind;
  }
  throw Error(ErrorCode::kInvalidParameter,
              fmt::format("unknown figure kind '{}' (wer-vs-param, wer-vs-layer, divergence-vs-layer)", name));
}

namespace {

// A plotted value keeps the CSV text so the sidecar is verbatim.
struct Cell {
  std::string text;
  double value = 0.0;
};

struct Point {
  Cell x;
  Cell y;
};

struct Series {
  std::string key;
  std::vector<Point> points;  // sorted by x
};

struct Baseline {
  std::string model_id;
  Cell y;
};

struct PlotData {
  std::string x_field;
  std::string y_field;
  std::string series_field;
  std::vector<Series> series;
  std::vector<Baseline> baselines;
};

std::string StripExtension(const std::string& path) {
  fs::path p(path);
  const auto ext = p.extension().string();
  if (ext == ".png" || ext == ".svg" || ext == ".tsv") p.replace_extension();
  return p.string();
}

bool AllNumeric(const std::vector<std::string>& keys) {
  for (const auto& k : keys) {
    Row row{{"k", k}};
    try {
      if (!NumberField(row, "k")) return false;
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

PlotData Collect(const FigureSpec& spec, const std::string& x_field, const std::string& series_field,
                 const std::string& y_field) {
  const Table table = LoadTables(spec.csv_paths);
  for (const auto& name : {x_field, series_field, y_field}) {
    if (!table.HasColumn(name)) {
      throw Error(ErrorCode::kInvalidParameter, fmt::format("column '{}' is not in the CSV header", name));
    }
  }
  for (const auto& [column, value] : spec.filters) {
    if (!table.HasColumn(column)) {
      throw Error(ErrorCode::kInvalidParameter, fmt::format("filter column '{}' is not in the CSV header", column));
    }
  }

  PlotData data{x_field, y_field, series_field, {}, {}};
  std::map<std::string, std::map<double, Point>> cells;
  std::set<double> xs;
  std::map<double, std::string> x_text;
  std::vector<std::string> order;
  std::set<std::string> seen_baseline;
  std::vector<std::string> missing;
  const bool wer_kind = y_field == "wer";

  for (const auto& row : table.rows) {
    bool keep = true;
    for (const auto& [column, value] : spec.filters) keep = keep && TextField(row, column) == value;
    if (!keep) continue;
    if (wer_kind && TextField(row, "point") == "baseline") {
      const auto model = TextField(row, "model_id");
      const auto y = NumberField(row, y_field);
      if (y && seen_baseline.insert(model).second) {
        data.baselines.push_back({model, {TextField(row, y_field), *y}});
      }
      continue;
    }
    const auto x = NumberField(row, x_field);
    if (!x) continue;
    const std::string key = TextField(row, series_field);
    if (!cells.count(key)) order.push_back(key);
    auto& by_x = cells[key];
    xs.insert(*x);
    x_text.emplace(*x, TextField(row, x_field));
    const auto y = NumberField(row, y_field);
    if (!y) {
      missing.push_back(fmt::format("{}={} {}={} (no {} value)", series_field, key, x_field,
                                    TextField(row, x_field), y_field));
      continue;
    }
    if (by_x.count(*x)) {
      throw Error(ErrorCode::kContract,
                  fmt::format("two rows for {}={} at {}={}; add a filter to select one", series_field, key,
                              x_field, TextField(row, x_field)));
    }
    by_x[*x] = {{TextField(row, x_field), *x}, {TextField(row, y_field), *y}};
  }

  if (cells.empty()) {
    throw Error(ErrorCode::kMissingPoints,
                fmt::format("no plottable rows with {} and {} in {} input file(s)", x_field, y_field,
                            spec.csv_paths.size()));
  }
  for (const auto& key : order) {
    for (double x : xs) {
      if (!cells[key].count(x)) {
        const std::string entry = fmt::format("{}={} {}={}", series_field, key, x_field, x_text[x]);
        if (std::none_of(missing.begin(), missing.end(),
                         [&](const std::string& m) { return m.rfind(entry, 0) == 0; })) {
          missing.push_back(entry);
        }
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += "\n  " + m;
    throw Error(ErrorCode::kMissingPoints, fmt::format("{} missing grid point(s):{}", missing.size(), list));
  }

  if (AllNumeric(order)) {
    std::stable_sort(order.begin(), order.end(), [](const std::string& a, const std::string& b) {
      return std::stod(a) < std::stod(b);
    });
  }
  for (const auto& key : order) {
    Series s{key, {}};
    for (const auto& [x, p] : cells[key]) s.points.push_back(p);
    data.series.push_back(std::move(s));
  }
  return data;
}

std::string SidecarText(const FigureSpec& spec, const PlotData& data) {
  std::ostringstream out;
  out << "# kind\t" << FigureKindName(spec.kind) << '\n';
  out << "# x\t" << data.x_field << '\n';
  out << "# y\t" << data.y_field << '\n';
  out << "# series\t" << data.series_field << '\n';
  out << "# x_scale\t" << (spec.log_x ? "log" : "linear") << '\n';
  for (const auto& [column, value] : spec.filters) out << "# filter\t" << column << '=' << value << '\n';
  out << "role\tseries\tx\ty\n";
  for (const auto& s : data.series) {
    for (const auto& p : s.points) out << "point\t" << s.key << '\t' << p.x.text << '\t' << p.y.text << '\n';
  }
  for (const auto& b : data.baselines) out << "baseline\t" << b.model_id << "\t\t" << b.y.text << '\n';
  return out.str();
}

// Drawing primitives shared by the raster and vector back ends.
enum class Anchor { kStart, kMiddle, kEnd };

struct Prim {
  enum Kind { kLine, kDisc, kText, kVText } kind;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  Color color;
  int thickness = 1;
  int dash = 0;
  std::string text;
  Anchor anchor = Anchor::kStart;
};

constexpr int kWidth = 960;
constexpr int kHeight = 600;
constexpr int kFontScale = 2;
const Color kBlack{0, 0, 0};
const Color kGrid{225, 225, 225};
const Color kWhite{255, 255, 255};

Color Palette(std::size_t i) {
  static const Color colors[] = {{31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},
                                 {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127},
                                 {188, 189, 34},  {23, 190, 207}};
  return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

struct Ticks {
  double lo;
  double hi;
  double step;
  int decimals;
};

Ticks NiceTicks(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  bool quarter = false;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    quarter = m == 2.5;
    if (raw <= step) break;
  }
  const int decimals = std::max(0, static_cast<int>(-std::floor(std::log10(step) + 1e-9)) + (quarter ? 1 : 0));
  return {std::floor(lo / step + 1e-9) * step, std::ceil(hi / step - 1e-9) * step, step, decimals};
}

std::string AxisLabel(const std::string& field) {
  if (field == "wer") return "WER";
  if (field == "dist") return "normalized L2 divergence";
  if (field == "rho") return "rho";
  if (field == "layer") return "layer";
  return field;
}

std::vector<Prim> Layout(const FigureSpec& spec, const PlotData& data, int* width_out) {
  std::vector<std::string> labels;
  for (const auto& s : data.series) {
    labels.push_back(data.series_field == "model_id" ? s.key : data.series_field + "=" + s.key);
  }
  for (const auto& b : data.baselines) labels.push_back("baseline " + b.model_id);
  int legend_w = 0;
  for (const auto& l : labels) legend_w = std::max(legend_w, TextWidth(l, kFontScale));
  const int width = kWidth + std::max(0, legend_w - 160);
  *width_out = width;

  const double left = 100, right = width - legend_w - 70, top = 60, bottom = kHeight - 80;

  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  double xmin = INFINITY, xmax = -INFINITY, ymin = 0.0, ymax = -INFINITY;
  for (const auto& s : data.series) {
    for (const auto& p : s.points) {
      if (spec.log_x && p.x.value <= 0) {
        throw Error(ErrorCode::kInvalidParameter,
                    fmt::format("log x axis needs positive {} values, got {}", data.x_field, p.x.text));
      }
      xmin = std::min(xmin, tx(p.x.value));
      xmax = std::max(xmax, tx(p.x.value));
      ymin = std::min(ymin, p.y.value);
      ymax = std::max(ymax, p.y.value);
    }
  }
  for (const auto& b : data.baselines) {
    ymin = std::min(ymin, b.y.value);
    ymax = std::max(ymax, b.y.value);
  }
  const Ticks xt = NiceTicks(xmin, xmax);
  const Ticks yt = NiceTicks(ymin, ymax);
  auto px = [&](double v) { return left + (tx(v) - xt.lo) / (xt.hi - xt.lo) * (right - left); };
  auto py = [&](double v) { return bottom - (v - yt.lo) / (yt.hi - yt.lo) * (bottom - top); };

  std::vector<Prim> prims;
  auto line = [&](double x0, double y0, double x1, double y1, Color c, int t = 1, int dash = 0) {
    prims.push_back({Prim::kLine, x0, y0, x1, y1, c, t, dash, {}, Anchor::kStart});
  };
  auto text = [&](double x, double y, std::string s, Anchor a, Color c = kBlack) {
    prims.push_back({Prim::kText, x, y, 0, 0, c, 1, 0, std::move(s), a});
  };

  const int nx = static_cast<int>(std::lround((xt.hi - xt.lo) / xt.step));
  for (int i = 0; i <= nx; ++i) {
    const double v = xt.lo + i * xt.step;
    const double x = left + (v - xt.lo) / (xt.hi - xt.lo) * (right - left);
    line(x, top, x, bottom, kGrid);
    line(x, bottom, x, bottom + 6, kBlack);
    const double shown = spec.log_x ? std::pow(10.0, v) : v;
    text(x, bottom + 20, spec.log_x ? fmt::format("{:g}", shown) : fmt::format("{:.{}f}", shown, xt.decimals),
         Anchor::kMiddle);
  }
  const int ny = static_cast<int>(std::lround((yt.hi - yt.lo) / yt.step));
  for (int i = 0; i <= ny; ++i) {
    const double v = yt.lo + i * yt.step;
    const double y = py(v);
    line(left, y, right, y, kGrid);
    line(left - 6, y, left, y, kBlack);
    text(left - 10, y, fmt::format("{:.{}f}", v, yt.decimals), Anchor::kEnd);
  }
  line(left, top, left, bottom, kBlack, 2);
  line(left, bottom, right, bottom, kBlack, 2);

  const std::string title =
      spec.title.empty() ? fmt::format("{} vs {}", AxisLabel(data.y_field), AxisLabel(data.x_field)) : spec.title;
  text((left + right) / 2, top / 2, title, Anchor::kMiddle);
  text((left + right) / 2, bottom + 50, AxisLabel(data.x_field) + (spec.log_x ? " (log)" : ""), Anchor::kMiddle);
  prims.push_back({Prim::kVText, 30, (top + bottom) / 2, 0, 0, kBlack, 1, 0, AxisLabel(data.y_field),
                   Anchor::kMiddle});

  std::size_t color_index = 0;
  for (const auto& s : data.series) {
    const Color c = Palette(color_index++);
    for (std::size_t i = 1; i < s.points.size(); ++i) {
      line(px(s.points[i - 1].x.value), py(s.points[i - 1].y.value), px(s.points[i].x.value),
           py(s.points[i].y.value), c, 2);
    }
    for (const auto& p : s.points) {
      prims.push_back({Prim::kDisc, px(p.x.value), py(p.y.value), 4.0, 0, c, 1, 0, {}, Anchor::kStart});
    }
  }
  for (const auto& b : data.baselines) {
    line(left, py(b.y.value), right, py(b.y.value), Palette(color_index++), 1, 6);
  }

  const double lx = right + 20;
  double ly = top + 10;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const Color c = Palette(i);
    const bool is_baseline = i >= data.series.size();
    line(lx, ly, lx + 28, ly, c, is_baseline ? 1 : 2, is_baseline ? 6 : 0);
    if (!is_baseline) prims.push_back({Prim::kDisc, lx + 14, ly, 4.0, 0, c, 1, 0, {}, Anchor::kStart});
    text(lx + 36, ly, labels[i], Anchor::kStart);
    ly += 24;
  }
  return prims;
}

void RenderPng(const std::vector<Prim>& prims, int width, const std::string& path) {
  Canvas canvas(width, kHeight, kWhite);
  for (const auto& p : prims) {
    switch (p.kind) {
      case Prim::kLine: canvas.Line(p.x0, p.y0, p.x1, p.y1, p.color, p.thickness, p.dash); break;
      case Prim::kDisc: canvas.Disc(p.x0, p.y0, p.x1, p.color); break;
      case Prim::kText: {
        const int w = TextWidth(p.text, kFontScale);
        int x = static_cast<int>(std::lround(p.x0));
        if (p.anchor == Anchor::kMiddle) x -= w / 2;
        if (p.anchor == Anchor::kEnd) x -= w;
        canvas.Text(x, static_cast<int>(std::lround(p.y0)) - TextHeight(kFontScale) / 2, p.text, p.color,
                    kFontScale);
        break;
      }
      case Prim::kVText: {
        const int w = TextWidth(p.text, kFontScale);
        canvas.TextVertical(static_cast<int>(std::lround(p.x0)) - TextHeight(kFontScale) / 2,
                            static_cast<int>(std::lround(p.y0)) + w / 2, p.text, p.color, kFontScale);
        break;
      }
    }
  }
  canvas.WritePng(path);
}

std::string XmlEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string RenderSvg(const std::vector<Prim>& prims, int width) {
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      width, kHeight);
  for (const auto& p : prims) {
    const char* anchor = p.anchor == Anchor::kMiddle ? "middle" : p.anchor == Anchor::kEnd ? "end" : "start";
    switch (p.kind) {
      case Prim::kLine:
        out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"{}\" "
                           "stroke-width=\"{}\"{}/>\n",
                           p.x0, p.y0, p.x1, p.y1, p.color.Hex(), p.thickness,
                           p.dash > 0 ? fmt::format(" stroke-dasharray=\"{0},{0}\"", p.dash) : "");
        break;
      case Prim::kDisc:
        out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.1f}\" fill=\"{}\"/>\n", p.x0, p.y0, p.x1,
                           p.color.Hex());
        break;
      case Prim::kText:
        out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"14\" "
                           "text-anchor=\"{}\" dominant-baseline=\"middle\" fill=\"{}\">{}</text>\n",
                           p.x0, p.y0, anchor, p.color.Hex(), XmlEscape(p.text));
        break;
      case Prim::kVText:
        out += fmt::format("<text x=\"{0:.2f}\" y=\"{1:.2f}\" transform=\"rotate(-90 {0:.2f} {1:.2f})\" "
                           "font-family=\"sans-serif\" font-size=\"14\" text-anchor=\"{2}\" "
                           "dominant-baseline=\"middle\" fill=\"{3}\">{4}</text>\n",
                           p.x0, p.y0, anchor, p.color.Hex(), XmlEscape(p.text));
        break;
    }
  }
  out += "</svg>\n";
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, fmt::format("cannot write '{}'", path));
}

}  // namespace

FigureFiles EmitFigure(const FigureSpec& spec) {
  if (spec.output_path.empty()) throw Error(ErrorCode::kInvalidParameter, "figure output path is empty");
  const bool param = spec.kind == FigureKind::kWerVsParam;
  const std::string x_field = !spec.x_field.empty() ? spec.x_field : param ? "rho" : "layer";
  const std::string series_field = !spec.series_field.empty() ? spec.series_field : param ? "model_id" : "rho";
  const std::string y_field = spec.kind == FigureKind::kDivergenceVsLayer ? "dist" : "wer";

  const PlotData data = Collect(spec, x_field, series_field, y_field);

  const std::string stem = StripExtension(spec.output_path);
  const fs::path parent = fs::path(stem).parent_path();
  if (!parent.empty()) fs::create_directories(parent);

  FigureFiles files{stem + ".png", stem + ".svg", stem + ".tsv", 0};
  for (const auto& s : data.series) files.num_points += s.points.size();

  int width = kWidth;
  const auto prims = Layout(spec, data, &width);
  WriteText(files.data, SidecarText(spec, data));
  WriteText(files.svg, RenderSvg(prims, width));
  RenderPng(prims, width, files.png);
  return files;
}

}  // namespace asrprobe::report
