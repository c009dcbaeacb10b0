#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sgir {

// One plotted series: points, an optional +/- band (e.g. instance standard
// deviation), and an optional straight fit line in data coordinates.
struct PlotSeries {
  std::string label;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<double> band;  // empty or per-point half-width
  std::optional<std::pair<double, double>> fit;  // (slope, intercept) in plot coords
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;  // non-positive points are dropped with a warning
  int width = 720;
  int height = 480;
};

// Static SVG: polylines per series, shaded bands, tick labels, legend.
// Returns warnings (e.g. dropped log-scale points).
std::vector<std::string> emit_plot(std::ostream& os, const PlotSpec& spec,
                                   const std::vector<PlotSeries>& series);

}  // namespace sgir
