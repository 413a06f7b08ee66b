#include "ionsense/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ionsense {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Round tick spacing to 1/2/5 times a power of ten.
double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(target_ticks, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double step = 10.0;
  if (norm <= 1.5) step = 1.0;
  else if (norm <= 3.5) step = 2.0;
  else if (norm <= 7.5) step = 5.0;
  return step * mag;
}

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const PlotOptions& opt) {
  double x_min = std::numeric_limits<double>::max(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    for (double v : s.x) { x_min = std::min(x_min, v); x_max = std::max(x_max, v); }
    for (double v : s.y) { y_min = std::min(y_min, v); y_max = std::max(y_max, v); }
  }
  if (!(x_min < x_max)) { x_max = x_min + 1.0; }
  if (!(y_min < y_max)) { y_max = y_min + 1.0; y_min -= 1.0; }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const int ml = 70, mr = 20, mt = 36, mb = 48;
  const double pw = opt.width - ml - mr;
  const double ph = opt.height - mt - mb;
  auto px = [&](double x) { return ml + pw * (x - x_min) / (x_max - x_min); };
  auto py = [&](double y) { return mt + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(opt.width) + "\" height=\"" + std::to_string(opt.height) +
         "\" viewBox=\"0 0 " + std::to_string(opt.width) + " " +
         std::to_string(opt.height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<rect x=\"" + std::to_string(ml) + "\" y=\"" + std::to_string(mt) +
         "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";

  const double xs = nice_step(x_max - x_min, 6);
  for (double x = std::ceil(x_min / xs) * xs; x <= x_max + 1e-12 * xs; x += xs) {
    out += "<line x1=\"" + fmt(px(x)) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" +
           fmt(px(x)) + "\" y2=\"" + fmt(mt + ph + 5) + "\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(mt + ph + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(x) + "</text>\n";
  }
  const double ys = nice_step(y_max - y_min, 6);
  for (double y = std::ceil(y_min / ys) * ys; y <= y_max + 1e-12 * ys; y += ys) {
    out += "<line x1=\"" + fmt(double(ml - 5)) + "\" y1=\"" + fmt(py(y)) +
           "\" x2=\"" + std::to_string(ml) + "\" y2=\"" + fmt(py(y)) +
           "\" stroke=\"#333\"/>\n";
    out += "<text x=\"" + fmt(double(ml - 8)) + "\" y=\"" + fmt(py(y) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + fmt(y) + "</text>\n";
  }

  int color = 0;
  for (const auto& s : series) {
    const char* stroke = kPalette[color % 6];
    std::string pts;
    const size_t n = std::min(s.x.size(), s.y.size());
    for (size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      pts += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
    }
    out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + stroke +
           "\" stroke-width=\"1.5\"/>\n";
    out += "<text x=\"" + std::to_string(ml + 10) + "\" y=\"" +
           std::to_string(mt + 16 + 14 * color) + "\" font-size=\"12\" fill=\"" +
           stroke + "\">" + s.label + "</text>\n";
    ++color;
  }

  if (!opt.title.empty()) {
    out += "<text x=\"" + std::to_string(opt.width / 2) + "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">" +
           opt.title + "</text>\n";
  }
  if (!opt.x_label.empty()) {
    out += "<text x=\"" + std::to_string(ml + int(pw / 2)) + "\" y=\"" +
           std::to_string(opt.height - 10) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + opt.x_label + "</text>\n";
  }
  if (!opt.y_label.empty()) {
    out += "<text x=\"14\" y=\"" + std::to_string(mt + int(ph / 2)) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           std::to_string(mt + int(ph / 2)) + ")\">" + opt.y_label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_line_plot(const std::string& path,
                     const std::vector<PlotSeries>& series,
                     const PlotOptions& options) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_line_plot: cannot open " + path);
  f << render_line_plot(series, options);
}

}  // namespace ionsense
