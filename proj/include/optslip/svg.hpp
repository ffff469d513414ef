#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace optslip {

struct SvgSeries {
  std::string label;
  std::string color;  // any SVG color string
  std::vector<double> x;
  std::vector<double> y;
};

// Self-contained SVG line chart with axes, tick labels and a legend.
void write_line_chart(const std::filesystem::path& path,
                      const std::string& title, const std::string& x_label,
                      const std::string& y_label,
                      const std::vector<SvgSeries>& series);

}  // namespace optslip
