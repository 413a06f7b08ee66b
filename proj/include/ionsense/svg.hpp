// svg.hpp — static polyline plots with linear axes; a convenience view of
// the CSV data, not the contract.

#pragma once

#include <string>
#include <vector>

namespace ionsense {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
};

std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const PlotOptions& options);

void write_line_plot(const std::string& path,
                     const std::vector<PlotSeries>& series,
                     const PlotOptions& options);

}  // namespace ionsense
