#include "reprosolve/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reprosolve/harness.hpp"

namespace reprosolve {

namespace {
constexpr double kW = 760, kH = 480;
constexpr double kL = 70, kR = 160, kT = 40, kB = 55;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) { return format_double(v); }
}  // namespace

void SvgLinePlot::add_series(const std::string& name,
                             std::vector<std::pair<double, double>> points) {
  series_.push_back({name, std::move(points)});
}

std::string SvgLinePlot::render() const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto usable = [&](double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (log_x_ && x <= 0) return false;
    if (log_y_ && y <= 0) return false;
    return true;
  };
  for (const auto& s : series_)
    for (auto [x, y] : s.points) {
      if (!usable(x, y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin < xmax)) {
    xmin = log_x_ ? 1 : 0;
    xmax = log_x_ ? 10 : 1;
  }
  if (!(ymin < ymax)) {
    ymin = log_y_ ? 1e-1 : 0;
    ymax = log_y_ ? 1e1 : 1;
  }

  auto tx = [&](double x) {
    double a = log_x_ ? std::log10(x) : x;
    double lo = log_x_ ? std::log10(xmin) : xmin;
    double hi = log_x_ ? std::log10(xmax) : xmax;
    return kL + (a - lo) / (hi - lo) * (kW - kL - kR);
  };
  auto ty = [&](double y) {
    double a = log_y_ ? std::log10(y) : y;
    double lo = log_y_ ? std::log10(ymin) : ymin;
    double hi = log_y_ ? std::log10(ymax) : ymax;
    return kH - kB - (a - lo) / (hi - lo) * (kH - kT - kB);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) +
         "\" height=\"" + num(kH) + "\" viewBox=\"0 0 " + num(kW) + " " +
         num(kH) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">" + title_ + "</text>\n";

  // frame
  svg += "<rect x=\"" + num(kL) + "\" y=\"" + num(kT) + "\" width=\"" +
         num(kW - kL - kR) + "\" height=\"" + num(kH - kT - kB) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  auto decade_ticks = [](double lo, double hi) {
    std::vector<double> ticks;
    int a = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
    int b = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
    int step = std::max(1, (b - a) / 8);
    for (int e = a; e <= b; e += step) ticks.push_back(std::pow(10.0, e));
    return ticks;
  };

  if (log_x_) {
    for (double v : decade_ticks(xmin, xmax)) {
      double px = tx(v);
      svg += "<line x1=\"" + num(px) + "\" y1=\"" + num(kH - kB) + "\" x2=\"" +
             num(px) + "\" y2=\"" + num(kH - kB + 5) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + num(px) + "\" y=\"" + num(kH - kB + 18) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">1e" + num(std::round(std::log10(v))) + "</text>\n";
    }
  }
  if (log_y_) {
    for (double v : decade_ticks(ymin, ymax)) {
      double py = ty(v);
      svg += "<line x1=\"" + num(kL - 5) + "\" y1=\"" + num(py) + "\" x2=\"" +
             num(kL) + "\" y2=\"" + num(py) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + num(kL - 8) + "\" y=\"" + num(py + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">1e" + num(std::round(std::log10(v))) + "</text>\n";
    }
  }

  svg += "<text x=\"" + num((kL + kW - kR) / 2) + "\" y=\"" + num(kH - 14) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         xlabel_ + "</text>\n";
  svg += "<text x=\"18\" y=\"" + num((kT + kH - kB) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 " + num((kT + kH - kB) / 2) + ")\">" +
         ylabel_ + "</text>\n";

  for (std::size_t i = 0; i < series_.size(); ++i) {
    const char* color = kColors[i % 8];
    std::string pts;
    for (auto [x, y] : series_[i].points) {
      if (!usable(x, y)) continue;
      pts += num(tx(x)) + "," + num(ty(y)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.6\" points=\"" + pts + "\"/>\n";
    double ly = kT + 16 + 18 * static_cast<double>(i);
    svg += "<line x1=\"" + num(kW - kR + 12) + "\" y1=\"" + num(ly - 4) +
           "\" x2=\"" + num(kW - kR + 36) + "\" y2=\"" + num(ly - 4) +
           "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + num(kW - kR + 42) + "\" y=\"" + num(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + series_[i].name +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace reprosolve
