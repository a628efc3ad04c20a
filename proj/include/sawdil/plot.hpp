#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sawdil {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;  // draw points instead of a polyline
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
  // Longer series are thinned to at most this many vertices.
  std::size_t max_points = 2000;
};

// Minimal SVG line chart: axes with ticks, one polyline (or marker set)
// per series and a legend. Throws InvalidArgument on empty or mismatched
// series.
void write_svg_plot(std::ostream& os, std::span<const PlotSeries> series, const PlotOptions& options);

// Columns of a comparison CSV (param, empirical, analytic, diff, stderr).
struct CdfTable {
  std::vector<double> param;
  std::vector<double> empirical;
  std::vector<double> analytic;
  std::vector<double> diff;
  std::vector<double> error;
};

CdfTable read_cdf_csv(std::istream& is);

}  // namespace sawdil
