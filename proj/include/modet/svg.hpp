#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "modet/common.hpp"
#include "modet/io.hpp"

namespace modet {

/// Scatter plot of the first two embedding dimensions: inliers grey,
/// ground-truth structural outliers red, the top-m LOF ranks annotated with
/// their rank numbers. Fixed 800x600 viewBox, deterministic text output.
inline std::string scatter_svg(const ScoreTable& table, std::size_t top_m) {
  require(table.coords.cols() >= 2, errc::invalid_argument,
          "plot needs at least 2 embedding coordinates, got " +
              std::to_string(table.coords.cols()));
  const std::size_t n = table.n();
  require(n >= 1, errc::empty_input, "no observations to plot");

  constexpr double width = 800.0, height = 600.0, margin = 40.0;
  double xmin = table.coords.col(0).minCoeff(), xmax = table.coords.col(0).maxCoeff();
  double ymin = table.coords.col(1).minCoeff(), ymax = table.coords.col(1).maxCoeff();
  if (xmax == xmin) { xmin -= 1.0; xmax += 1.0; }
  if (ymax == ymin) { ymin -= 1.0; ymax += 1.0; }
  auto px = [&](double x) {
    return margin + (x - xmin) / (xmax - xmin) * (width - 2.0 * margin);
  };
  auto py = [&](double y) {  // SVG y grows downward
    return height - margin - (y - ymin) / (ymax - ymin) * (height - 2.0 * margin);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
         "width=\"800\" height=\"600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < n; ++i) {
    const bool structural = !table.labels.empty() && table.labels[i] == "structural";
    svg += "<circle cx=\"" + format_double(px(table.coords(static_cast<Eigen::Index>(i), 0))) +
           "\" cy=\"" + format_double(py(table.coords(static_cast<Eigen::Index>(i), 1))) +
           "\" r=\"4\" fill=\"" + (structural ? "#d62728" : "#9a9a9a") + "\"/>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (table.ranks[i] > top_m) continue;
    svg += "<text x=\"" +
           format_double(px(table.coords(static_cast<Eigen::Index>(i), 0)) + 6.0) + "\" y=\"" +
           format_double(py(table.coords(static_cast<Eigen::Index>(i), 1)) - 6.0) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + std::to_string(table.ranks[i]) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace modet
