#ifndef COMPDIST_SVG_HPP
#define COMPDIST_SVG_HPP

// Minimal deterministic SVG line plots (axes, polylines, reference lines,
// optional log scales). CSV output is the source of truth; these renders
// are cosmetic companions.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace compdist {

struct SvgSeries {
  std::string label;
  std::string color = "#1f6fb2";
  bool dashed = false;
  std::vector<std::pair<double, double>> points;
};

struct SvgOptions {
  int width = 720;
  int height = 480;
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool logx = false;
  bool logy = false;
  // Horizontal reference lines as (y value, label).
  std::vector<std::pair<double, std::string>> hlines;
};

namespace detail {

inline std::string fmt_num(double v, const char* spec = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace detail

inline std::string render_line_plot(const std::vector<SvgSeries>& series,
                                    const SvgOptions& opt) {
  const double margin_l = 64.0, margin_r = 18.0, margin_t = 34.0, margin_b = 48.0;
  const double plot_w = opt.width - margin_l - margin_r;
  const double plot_h = opt.height - margin_t - margin_b;

  const auto tx = [&](double x) { return opt.logx ? std::log10(x) : x; };
  const auto ty = [&](double y) { return opt.logy ? std::log10(y) : y; };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const SvgSeries& s : series) {
    for (const auto& [x, y] : s.points) {
      if (opt.logx && !(x > 0.0)) continue;
      if (opt.logy && !(y > 0.0)) continue;
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, tx(x));
      xmax = std::max(xmax, tx(x));
      ymin = std::min(ymin, ty(y));
      ymax = std::max(ymax, ty(y));
    }
  }
  for (const auto& [y, label] : opt.hlines) {
    if (opt.logy && !(y > 0.0)) continue;
    ymin = std::min(ymin, ty(y));
    ymax = std::max(ymax, ty(y));
  }
  if (!(xmin < xmax)) {
    xmax = xmin + 1.0;
  }
  if (!(ymin < ymax)) {
    ymax = ymin + 1.0;
  }
  const double xpad = 0.02 * (xmax - xmin);
  const double ypad = 0.04 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const auto px = [&](double x) {
    return margin_l + (tx(x) - xmin) / (xmax - xmin) * plot_w;
  };
  const auto py = [&](double y) {
    return margin_t + (ymax - ty(y)) / (ymax - ymin) * plot_h;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
         "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
         std::to_string(opt.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    out += "<text x=\"" + detail::fmt_num(margin_l) +
           "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" + opt.title +
           "</text>\n";
  }

  // Axes box and ticks (5 per axis, untransformed labels).
  out += "<rect x=\"" + detail::fmt_num(margin_l) + "\" y=\"" +
         detail::fmt_num(margin_t) + "\" width=\"" + detail::fmt_num(plot_w) +
         "\" height=\"" + detail::fmt_num(plot_h) +
         "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    const double label_x = opt.logx ? std::pow(10.0, fx) : fx;
    const double label_y = opt.logy ? std::pow(10.0, fy) : fy;
    const double gx = margin_l + plot_w * i / 5.0;
    const double gy = margin_t + plot_h - plot_h * i / 5.0;
    out += "<line x1=\"" + detail::fmt_num(gx) + "\" y1=\"" +
           detail::fmt_num(margin_t + plot_h) + "\" x2=\"" + detail::fmt_num(gx) +
           "\" y2=\"" + detail::fmt_num(margin_t + plot_h + 5) +
           "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + detail::fmt_num(gx) + "\" y=\"" +
           detail::fmt_num(margin_t + plot_h + 18) +
           "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" +
           detail::fmt_num(label_x, "%.4g") + "</text>\n";
    out += "<line x1=\"" + detail::fmt_num(margin_l - 5) + "\" y1=\"" +
           detail::fmt_num(gy) + "\" x2=\"" + detail::fmt_num(margin_l) + "\" y2=\"" +
           detail::fmt_num(gy) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + detail::fmt_num(margin_l - 8) + "\" y=\"" +
           detail::fmt_num(gy + 3) +
           "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" +
           detail::fmt_num(label_y, "%.4g") + "</text>\n";
  }
  if (!opt.xlabel.empty()) {
    out += "<text x=\"" + detail::fmt_num(margin_l + plot_w / 2) + "\" y=\"" +
           detail::fmt_num(opt.height - 10.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           opt.xlabel + "</text>\n";
  }
  if (!opt.ylabel.empty()) {
    out += "<text x=\"14\" y=\"" + detail::fmt_num(margin_t + plot_h / 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 " +
           detail::fmt_num(margin_t + plot_h / 2) + ")\">" + opt.ylabel +
           "</text>\n";
  }

  for (const auto& [y, label] : opt.hlines) {
    if (opt.logy && !(y > 0.0)) continue;
    const double gy = py(y);
    out += "<line x1=\"" + detail::fmt_num(margin_l) + "\" y1=\"" +
           detail::fmt_num(gy) + "\" x2=\"" + detail::fmt_num(margin_l + plot_w) +
           "\" y2=\"" + detail::fmt_num(gy) +
           "\" stroke=\"#999\" stroke-dasharray=\"2,3\"/>\n";
    if (!label.empty()) {
      out += "<text x=\"" + detail::fmt_num(margin_l + plot_w - 4) + "\" y=\"" +
             detail::fmt_num(gy - 4) +
             "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\" "
             "fill=\"#666\">" +
             label + "</text>\n";
    }
  }

  int legend_row = 0;
  for (const SvgSeries& s : series) {
    std::string pts;
    bool first = true;
    for (const auto& [x, y] : s.points) {
      if (opt.logx && !(x > 0.0)) continue;
      if (opt.logy && !(y > 0.0)) continue;
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      pts += (first ? "" : " ") + detail::fmt_num(px(x), "%.2f") + "," +
             detail::fmt_num(py(y), "%.2f");
      first = false;
    }
    if (pts.empty()) continue;
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\"";
    if (s.dashed) out += " stroke-dasharray=\"6,4\"";
    out += " stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    ++legend_row;
  }
  // Legend in the top-right corner of the plot area.
  legend_row = 0;
  for (const SvgSeries& s : series) {
    if (s.points.empty()) continue;
    const double lx = margin_l + plot_w - 150.0;
    const double ly = margin_t + 14.0 + 16.0 * legend_row;
    out += "<line x1=\"" + detail::fmt_num(lx) + "\" y1=\"" + detail::fmt_num(ly - 4) +
           "\" x2=\"" + detail::fmt_num(lx + 22) + "\" y2=\"" +
           detail::fmt_num(ly - 4) + "\" stroke=\"" + s.color + "\"";
    if (s.dashed) out += " stroke-dasharray=\"6,4\"";
    out += " stroke-width=\"1.5\"/>\n";
    out += "<text x=\"" + detail::fmt_num(lx + 27) + "\" y=\"" + detail::fmt_num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label + "</text>\n";
    ++legend_row;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace compdist

#endif
