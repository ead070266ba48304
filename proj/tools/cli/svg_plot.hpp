#pragma once

// Static SVG figure of the squared-speed decomposition against radius.

#include <string>
#include <vector>

namespace scaledyn::cli {

struct Curve {
  std::string label;
  std::string color;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<Curve> curves;
  bool log_x = false;
};

/// 800x600 document; identical input gives byte-identical output.
std::string render_svg(const PlotSpec& spec);

}  // namespace scaledyn::cli
