#pragma once

// Minimal deterministic SVG plots. Identical input gives byte-identical output.

#include <string>
#include <vector>

namespace vpmc::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  int width = 720;
  int height = 440;
};

// Line plot of one or more series. Non-positive values are dropped on a log
// axis; with no drawable points only the axes are emitted.
std::string line_plot(const std::vector<Series>& series, const PlotOptions& opts);

// Heatmap of a row-major ny x nx grid over [x0, x1] x [y0, y1].
std::string heatmap(const std::vector<double>& values, int nx, int ny, double x0, double x1, double y0,
                    double y1, const PlotOptions& opts);

}  // namespace vpmc::svg
