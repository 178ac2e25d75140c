#pragma once

#include <string>
#include <vector>

namespace ojj::cli {

struct PlotSeries {
  std::string label;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<PlotSeries> series;
};

/// Minimal standalone SVG line chart. Non-finite points break the line.
std::string render_svg(const LinePlot& plot);

}  // namespace ojj::cli
