#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cylhypo::cli {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Static line chart. Points with non-positive coordinates on a log axis are dropped.
std::string line_chart(const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace cylhypo::cli
