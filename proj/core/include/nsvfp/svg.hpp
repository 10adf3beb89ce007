#pragma once
// Minimal SVG line plots for the experiment outputs. No dependency: the
// harness only needs log-scale polylines with a legend.

#include <string>
#include <vector>

namespace nsvfp {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

// log_y plots log10 of y; non-positive values are dropped from the polyline.
// Throws std::runtime_error when the file cannot be written.
void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series, bool log_y);

}  // namespace nsvfp
