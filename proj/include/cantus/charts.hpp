// Standalone SVG figures: bar charts for per-song feature values and the
// aggregate interval profile, scatter plots for feature-vs-plays. Textual,
// diffable, byte-deterministic for the same input.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "cantus/error.hpp"
#include "cantus/report.hpp"

namespace cantus {

struct BarDatum {
  std::string label;
  double value = 0.0;
};

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

namespace detail {

inline constexpr double kSvgWidth = 960.0;
inline constexpr double kSvgHeight = 540.0;
inline constexpr double kMarginLeft = 70.0;
inline constexpr double kMarginRight = 20.0;
inline constexpr double kMarginTop = 50.0;
inline constexpr double kMarginBottom = 90.0;
inline constexpr double kPlotWidth = kSvgWidth - kMarginLeft - kMarginRight;
inline constexpr double kPlotHeight = kSvgHeight - kMarginTop - kMarginBottom;
inline constexpr double kPlotBottom = kSvgHeight - kMarginBottom;

inline std::string coord(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string xml_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline void require_finite_values(const std::vector<double>& values) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(errc::invalid_field, "chart values must be finite");
    }
  }
}

inline std::string svg_open(const std::string& title) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"960\" "
      "height=\"540\" viewBox=\"0 0 960 540\">\n";
  out += "  <rect x=\"0\" y=\"0\" width=\"960\" height=\"540\" fill=\"#ffffff\"/>\n";
  out += "  <text x=\"480\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" "
         "text-anchor=\"middle\">" +
         xml_escape(title) + "</text>\n";
  return out;
}

inline std::string axis_lines() {
  std::string out;
  out += "  <line x1=\"" + coord(kMarginLeft) + "\" y1=\"" + coord(kMarginTop) +
         "\" x2=\"" + coord(kMarginLeft) + "\" y2=\"" + coord(kPlotBottom) +
         "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  out += "  <line x1=\"" + coord(kMarginLeft) + "\" y1=\"" + coord(kPlotBottom) +
         "\" x2=\"" + coord(kSvgWidth - kMarginRight) + "\" y2=\"" +
         coord(kPlotBottom) + "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  return out;
}

inline std::string y_tick(double y, const std::string& label) {
  std::string out;
  out += "  <line x1=\"" + coord(kMarginLeft - 4) + "\" y1=\"" + coord(y) +
         "\" x2=\"" + coord(kMarginLeft) + "\" y2=\"" + coord(y) +
         "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  out += "  <text x=\"" + coord(kMarginLeft - 8) + "\" y=\"" + coord(y + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
         xml_escape(label) + "</text>\n";
  return out;
}

}  // namespace detail

inline std::string svg_bar_chart(const std::vector<BarDatum>& series,
                                 const std::string& title) {
  if (series.empty()) throw Error(errc::empty_input, "bar chart with no bars");
  std::vector<double> values;
  values.reserve(series.size());
  for (const BarDatum& d : series) values.push_back(d.value);
  detail::require_finite_values(values);

  const double max_value = *std::max_element(values.begin(), values.end());
  const double scale_max = max_value > 0.0 ? max_value : 1.0;

  std::string out = detail::svg_open(title);
  out += detail::axis_lines();
  for (int tick = 0; tick <= 4; ++tick) {
    const double fraction = tick / 4.0;
    const double y = detail::kPlotBottom - fraction * detail::kPlotHeight;
    out += detail::y_tick(y, detail::tick_label(fraction * scale_max));
  }

  const size_t n = series.size();
  const double slot = detail::kPlotWidth / static_cast<double>(n);
  const double bar_width = slot * 0.7;
  for (size_t i = 0; i < n; ++i) {
    const double height = series[i].value / scale_max * detail::kPlotHeight;
    const double x = detail::kMarginLeft + slot * static_cast<double>(i) + slot * 0.15;
    const double y = detail::kPlotBottom - height;
    out += "  <rect class=\"bar\" x=\"" + detail::coord(x) + "\" y=\"" +
           detail::coord(y) + "\" width=\"" + detail::coord(bar_width) +
           "\" height=\"" + detail::coord(height) + "\" fill=\"#4878a8\"/>\n";
  }
  for (size_t i = 0; i < n; ++i) {
    const double cx =
        detail::kMarginLeft + slot * static_cast<double>(i) + slot * 0.5;
    const double ly = detail::kPlotBottom + 14;
    out += "  <text x=\"" + detail::coord(cx) + "\" y=\"" + detail::coord(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" "
           "transform=\"rotate(-40 " +
           detail::coord(cx) + " " + detail::coord(ly) + ")\">" +
           detail::xml_escape(series[i].label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline std::string svg_scatter(const std::vector<ScatterPoint>& series,
                               const std::string& title,
                               const std::string& x_label = "x",
                               const std::string& y_label = "y") {
  if (series.empty()) throw Error(errc::empty_input, "scatter plot with no points");
  std::vector<double> xs, ys;
  for (const ScatterPoint& p : series) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  detail::require_finite_values(xs);
  detail::require_finite_values(ys);

  auto padded_range = [](const std::vector<double>& v) {
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    double pad = (hi - lo) * 0.05;
    if (pad == 0.0) pad = std::max(1.0, std::fabs(hi) * 0.05);
    return std::pair<double, double>{lo - pad, hi + pad};
  };
  const auto [x_lo, x_hi] = padded_range(xs);
  const auto [y_lo, y_hi] = padded_range(ys);

  auto map_x = [&](double v) {
    return detail::kMarginLeft + (v - x_lo) / (x_hi - x_lo) * detail::kPlotWidth;
  };
  auto map_y = [&](double v) {
    return detail::kPlotBottom - (v - y_lo) / (y_hi - y_lo) * detail::kPlotHeight;
  };

  std::string out = detail::svg_open(title);
  out += detail::axis_lines();
  out += detail::y_tick(map_y(y_lo), detail::tick_label(y_lo));
  out += detail::y_tick(map_y(y_hi), detail::tick_label(y_hi));
  for (double v : {x_lo, x_hi}) {
    out += "  <text x=\"" + detail::coord(map_x(v)) + "\" y=\"" +
           detail::coord(detail::kPlotBottom + 16) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           detail::tick_label(v) + "</text>\n";
  }
  out += "  <text x=\"" + detail::coord(detail::kMarginLeft + detail::kPlotWidth / 2) +
         "\" y=\"" + detail::coord(detail::kPlotBottom + 40) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
         detail::xml_escape(x_label) + "</text>\n";
  out += "  <text x=\"18\" y=\"" +
         detail::coord(detail::kMarginTop + detail::kPlotHeight / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " +
         detail::coord(detail::kMarginTop + detail::kPlotHeight / 2) + ")\">" +
         detail::xml_escape(y_label) + "</text>\n";

  // Markers in input order.
  for (const ScatterPoint& p : series) {
    out += "  <circle class=\"pt\" cx=\"" + detail::coord(map_x(p.x)) + "\" cy=\"" +
           detail::coord(map_y(p.y)) + "\" r=\"4\" fill=\"#a85048\"/>\n";
  }
  for (const ScatterPoint& p : series) {
    if (p.label.empty()) continue;
    out += "  <text x=\"" + detail::coord(map_x(p.x) + 6) + "\" y=\"" +
           detail::coord(map_y(p.y) - 6) +
           "\" font-family=\"sans-serif\" font-size=\"10\">" +
           detail::xml_escape(p.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline void render_bar_chart(const std::vector<BarDatum>& series,
                             const std::string& title,
                             const std::filesystem::path& path) {
  write_text_file(path, svg_bar_chart(series, title));
}

inline void render_scatter(const std::vector<ScatterPoint>& series,
                           const std::string& title,
                           const std::filesystem::path& path,
                           const std::string& x_label = "x",
                           const std::string& y_label = "y") {
  write_text_file(path, svg_scatter(series, title, x_label, y_label));
}

}  // namespace cantus
