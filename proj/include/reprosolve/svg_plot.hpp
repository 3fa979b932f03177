#pragma once

#include <string>
#include <utility>
#include <vector>

namespace reprosolve {

// Minimal hermetic SVG line plotter: axes, optional log scales, legend.
class SvgLinePlot {
 public:
  SvgLinePlot(std::string title, std::string xlabel, std::string ylabel,
              bool log_x = true, bool log_y = true)
      : title_(std::move(title)),
        xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)),
        log_x_(log_x),
        log_y_(log_y) {}

  void add_series(const std::string& name,
                  std::vector<std::pair<double, double>> points);

  std::string render() const;

 private:
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
  };
  std::string title_, xlabel_, ylabel_;
  bool log_x_, log_y_;
  std::vector<Series> series_;
};

}  // namespace reprosolve
