#pragma once

#include <string>
#include <vector>

#include "kscars/io.hpp"

namespace kscars {

struct PlotSpec {
  std::string title;
  std::string x_column;
  std::vector<std::string> line_columns;     // drawn as polylines
  std::vector<std::string> scatter_columns;  // drawn as markers
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 440;
};

/// SVG 1.1 document: linear axes with tick labels, one series per selected
/// column, legend in column order. Output depends only on the inputs.
std::string render_svg(const CsvTable& table, const PlotSpec& spec);

}  // namespace kscars
