//
// Copyright 2026 The simplexcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Self-contained SVG renderings of sweeps, regions, curves and sample
// scatters. Plots put e1 on the horizontal axis and e0 on the vertical one.

#ifndef SIMPLEXCERT_SVG_HPP_
#define SIMPLEXCERT_SVG_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simplexcert/analysis.hpp"
#include "simplexcert/core.hpp"

namespace simplexcert::svg {

inline constexpr double kMargin = 56.0;
inline constexpr double kPlot = 480.0;
inline constexpr double kLegend = 150.0;

// Categorical colours indexed by mechanism.
inline constexpr std::array<const char*, kNumMechanisms> kMechanismColours = {
    "#1f77b4", "#2ca02c", "#9467bd", "#d62728"};
inline constexpr const char* kEnsembleColour = "#000000";
inline constexpr const char* kBoundaryColour = "#ff2020";

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

// Viridis sampled at five stops, linearly interpolated.
inline std::string sequential_colour(double t) {
  static constexpr double kStops[5][3] = {{68, 1, 84},
                                          {59, 82, 139},
                                          {33, 145, 140},
                                          {94, 201, 98},
                                          {253, 231, 37}};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0) * 4.0;
  const int k = std::min(static_cast<int>(t), 3);
  const double f = t - k;
  char buf[8];
  std::snprintf(
      buf, sizeof buf, "#%02x%02x%02x",
      static_cast<int>(
          std::lround(kStops[k][0] + f * (kStops[k + 1][0] - kStops[k][0]))),
      static_cast<int>(
          std::lround(kStops[k][1] + f * (kStops[k + 1][1] - kStops[k][1]))),
      static_cast<int>(
          std::lround(kStops[k][2] + f * (kStops[k + 1][2] - kStops[k][2]))));
  return buf;
}

class Canvas {
 public:
  Canvas(std::string_view title, double x_max, double y_max,
         std::string_view x_label, std::string_view y_label)
      : x_max_(x_max), y_max_(y_max) {
    const double w = kMargin * 2 + kPlot + kLegend;
    const double h = kMargin * 2 + kPlot;
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) +
             "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + ' ' +
             num(h) +
             "\" font-family=\"sans-serif\" font-size=\"12\" "
             "shape-rendering=\"crispEdges\">\n";
    body_ += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    text(kMargin + kPlot / 2, kMargin / 2, title, "middle", 14);
    text(kMargin + kPlot / 2, kMargin * 1.7 + kPlot, x_label, "middle");
    body_ += "<text transform=\"translate(" + num(kMargin * 0.35) + ',' +
             num(kMargin + kPlot / 2) +
             ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) +
             "</text>\n";
  }

  double px(double x) const { return kMargin + x / x_max_ * kPlot; }
  double py(double y) const { return kMargin + (1.0 - y / y_max_) * kPlot; }

  void rect(double x, double y, double w, double h, std::string_view fill) {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
             num(w) + "\" height=\"" + num(h) + "\" fill=\"" +
             std::string(fill) + "\"/>\n";
  }

  void line(double x0, double y0, double x1, double y1, std::string_view stroke,
            double width = 1.0) {
    body_ += "<line x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
             num(x1) + "\" y2=\"" + num(y1) + "\" stroke=\"" +
             std::string(stroke) + "\" stroke-width=\"" + num(width) + "\"/>\n";
  }

  void circle(double x, double y, double r, std::string_view fill) {
    body_ += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" +
             num(r) + "\" fill=\"" + std::string(fill) +
             "\" fill-opacity=\"0.6\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& points,
                std::string_view stroke) {
    body_ += "<polyline fill=\"none\" stroke=\"" + std::string(stroke) +
             "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : points)
      body_ += num(px(x)) + ',' + num(py(y)) + ' ';
    body_ += "\"/>\n";
  }

  void text(double x, double y, std::string_view s,
            std::string_view anchor = "start", int size = 12) {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" +
             std::string(anchor) + "\" font-size=\"" + std::to_string(size) +
             "\">" + escape(s) + "</text>\n";
  }

  void axes(int ticks = 5) {
    line(px(0), py(0), px(x_max_), py(0), "#000000");
    line(px(0), py(0), px(0), py(y_max_), "#000000");
    for (int k = 0; k <= ticks; ++k) {
      const double fx = x_max_ * k / ticks, fy = y_max_ * k / ticks;
      line(px(fx), py(0), px(fx), py(0) + 4, "#000000");
      line(px(0) - 4, py(fy), px(0), py(fy), "#000000");
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", fx);
      text(px(fx), py(0) + 16, buf, "middle", 10);
      std::snprintf(buf, sizeof buf, "%g", fy);
      text(px(0) - 6, py(fy) + 3, buf, "end", 10);
    }
  }

  void legend_entry(int row, std::string_view colour, std::string_view label) {
    const double x = kMargin * 1.5 + kPlot, y = kMargin + 16.0 * row;
    rect(x, y - 9, 10, 10, colour);
    text(x + 16, y, label);
  }

  void boundaries(const RegionMap& map) {
    for (const BoundarySegment& s : map.boundaries) {
      line(px(s.e1_start), py(s.e0_start), px(s.e1_end), py(s.e0_end),
           kBoundaryColour, 1.5);
    }
  }

  std::string finish() {
    body_ += "</svg>\n";
    return std::move(body_);
  }

 private:
  double x_max_;
  double y_max_;
  std::string body_;
};

namespace internal {

inline void lattice_cells(Canvas& canvas, const SweepGrid& grid,
                          auto&& colour_of) {
  const double h = 1.0 / static_cast<double>(grid.resolution() - 1);
  const double size = h * kPlot;
  for (std::size_t i = 0; i < grid.resolution(); ++i) {
    for (std::size_t j = 0; j < grid.resolution(); ++j) {
      if (!grid.feasible(i, j)) continue;
      const std::string colour = colour_of(i, j);
      if (colour.empty()) continue;
      canvas.rect(canvas.px(grid.coordinate(j) - h / 2),
                  canvas.py(grid.coordinate(i) + h / 2), size, size, colour);
    }
  }
}

}  // namespace internal

// Sequential heatmap of one lattice matrix with optional region overlay.
inline std::string heatmap(const SweepGrid& grid, const RealMatrix& values,
                           std::string_view title,
                           const RegionMap* overlay = nullptr) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values.data()) {
    if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  Canvas canvas(title, 1.0, 1.0, "E1", "E0");
  internal::lattice_cells(canvas, grid, [&](std::size_t i, std::size_t j) {
    const double v = values(i, j);
    return std::isfinite(v) ? sequential_colour((v - lo) / (hi - lo))
                            : std::string();
  });
  if (overlay) canvas.boundaries(*overlay);
  canvas.axes();
  for (int k = 0; k <= 4; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", lo + (hi - lo) * k / 4);
    canvas.legend_entry(k, sequential_colour(k / 4.0), buf);
  }
  return canvas.finish();
}

inline std::string region_map(const SweepGrid& grid, const RegionMap& map,
                              std::string_view title) {
  Canvas canvas(title, 1.0, 1.0, "E1", "E0");
  internal::lattice_cells(canvas, grid, [&](std::size_t i, std::size_t j) {
    const int label = map.labels(i, j);
    return label < 0 ? std::string("#dddddd")
                     : std::string(kMechanismColours[label]);
  });
  canvas.boundaries(map);
  canvas.axes();
  int row = 0;
  for (MechanismId id : grid.mechanisms().members()) {
    canvas.legend_entry(row++, kMechanismColours[index_of(id)], to_string(id));
  }
  canvas.legend_entry(row, "#dddddd", "no certificate");
  return canvas.finish();
}

inline std::string accuracy_curves(
    std::span<const RadiusField> fields,
    std::span<const std::vector<CurvePoint>> curves, std::string_view title) {
  double r_max = 0.0;
  for (const auto& curve : curves) {
    for (const CurvePoint& p : curve) r_max = std::max(r_max, p.radius);
  }
  if (!(r_max > 0.0)) r_max = 1.0;
  Canvas canvas(title, r_max, 1.0, "radius r", "certified accuracy");
  canvas.axes();
  for (std::size_t k = 0; k < fields.size(); ++k) {
    std::vector<std::pair<double, double>> points;
    for (const CurvePoint& p : curves[k])
      points.emplace_back(p.radius, p.accuracy);
    const char* colour =
        fields[k] ? kMechanismColours[index_of(*fields[k])] : kEnsembleColour;
    canvas.polyline(points, colour);
    canvas.legend_entry(static_cast<int>(k), colour, to_string(fields[k]));
  }
  return canvas.finish();
}

// Samples at their bounded (e1, e0), coloured by the winning mechanism.
inline std::string sample_scatter(std::span<const SampleRecord> records,
                                  MechanismSet mechanisms,
                                  std::string_view title,
                                  const RegionMap* overlay = nullptr) {
  Canvas canvas(title, 1.0, 1.0, "E1", "E0");
  if (overlay) canvas.boundaries(*overlay);
  for (const SampleRecord& rec : records) {
    if (!rec.bounds || !rec.outcome) continue;
    CertificationOutcome::Radii radii{};
    for (MechanismId id : mechanisms.members()) {
      radii[index_of(id)] = rec.outcome->radius(id);
    }
    const auto best = argmax_mechanism(radii, mechanisms);
    canvas.circle(canvas.px(rec.bounds->e1()), canvas.py(rec.bounds->e0()), 2.0,
                  best ? kMechanismColours[index_of(*best)] : "#888888");
  }
  canvas.axes();
  int row = 0;
  for (MechanismId id : mechanisms.members()) {
    canvas.legend_entry(row++, kMechanismColours[index_of(id)], to_string(id));
  }
  canvas.legend_entry(row, "#888888", "abstained");
  return canvas.finish();
}

}  // namespace simplexcert::svg

#endif  // SIMPLEXCERT_SVG_HPP_
