#pragma once

#include <string>
#include <vector>

namespace mcflab {

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct PlotSpec {
  std::string title, xlabel, ylabel;
  bool logx = false;
  bool logy = false;
  bool annotate_slope = false;  // least-squares log-log slope in the title
};

// Deterministic standalone SVG: fixed 800x560 canvas, fixed axis policy,
// coordinates printed at fixed precision. Same data, same bytes.
std::string render_line_plot(const PlotSpec& spec,
                             const std::vector<PlotSeries>& series);

std::string render_histogram(const std::string& title,
                             const std::vector<double>& values, int bins = 32);

}  // namespace mcflab
