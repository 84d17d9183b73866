#pragma once

// Minimal SVG renderers for quick looks at experiment output.

#include <string>
#include <vector>

namespace chiral::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series);

/// values is row-major [row][col] with rows along y and columns along x.
std::string heat_map(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<double>& x,
                     const std::vector<double>& y, const std::vector<double>& values);

}  // namespace chiral::svg
