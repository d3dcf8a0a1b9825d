#include "cylhypo/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cylhypo::cli {

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 50;
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string f3(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3f", v);
  return b;
}

std::string tick(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

}  // namespace

std::string line_chart(const ChartSpec& spec, const std::vector<Series>& series) {
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](std::pair<double, double> p) {
    if (!std::isfinite(p.first) || !std::isfinite(p.second)) return false;
    if (spec.log_x && p.first <= 0) return false;
    if (spec.log_y && p.second <= 0) return false;
    return true;
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (auto p : s.points)
      if (usable(p)) {
        x0 = std::min(x0, tx(p.first));
        x1 = std::max(x1, tx(p.first));
        y0 = std::min(y0, ty(p.second));
        y1 = std::max(y1, ty(p.second));
      }
  if (!(x1 >= x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = kW - kL - kR, ph = kH - kT - kB;
  auto px = [&](double v) { return kL + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kT + (1 - (v - y0) / (y1 - y0)) * ph; };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(spec.title) + "</text>\n";
  s += "<rect x=\"" + f3(kL) + "\" y=\"" + f3(kT) + "\" width=\"" + f3(pw) + "\" height=\"" + f3(ph) +
       "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = x0 + (x1 - x0) * i / 4, vy = y0 + (y1 - y0) * i / 4;
    const double lx = spec.log_x ? std::pow(10.0, vx) : vx, ly = spec.log_y ? std::pow(10.0, vy) : vy;
    s += "<text x=\"" + f3(px(vx)) + "\" y=\"" + f3(kH - kB + 16) + "\" text-anchor=\"middle\">" + tick(lx) + "</text>\n";
    s += "<text x=\"" + f3(kL - 6) + "\" y=\"" + f3(py(vy) + 4) + "\" text-anchor=\"end\">" + tick(ly) + "</text>\n";
  }
  s += "<text x=\"320\" y=\"" + f3(kH - 10) + "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + f3(kT + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + f3(kT + ph / 2) +
       ")\">" + escape(spec.y_label) + "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& se = series[k];
    std::string pts;
    for (auto p : se.points)
      if (usable(p)) pts += f3(px(tx(p.first))) + "," + f3(py(ty(p.second))) + " ";
    const char* color = kColors[k % 5];
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\"" +
         (se.dashed ? " stroke-dasharray=\"5,3\"" : "") + " points=\"" + pts + "\"/>\n";
    s += "<text x=\"" + f3(kL + 10) + "\" y=\"" + f3(kT + 16 + 14 * k) + "\" fill=\"" + color + "\">" + escape(se.label) +
         "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace cylhypo::cli
