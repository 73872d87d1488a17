#pragma once

#include <string>
#include <vector>

namespace mdlb::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> lower;  // band, drawn when both bounds are filled
  std::vector<double> upper;
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

/// Line charts side by side in a fixed 800x400 viewBox.
std::string line_chart(const std::vector<Panel>& panels);

/// Mean and mean +- one standard deviation across runs of equal length.
Series aggregate(const std::string& name, const std::vector<double>& x, const std::vector<std::vector<double>>& runs,
                 bool with_band);

}  // namespace mdlb::cli
