#pragma once

#include <string>
#include <vector>

namespace rgbm::cli {

/// Minimal self-contained SVG line chart: axes with ticks, a legend and one
/// polyline per series. Non-finite points break a line.
class LineChart {
  public:
    struct Series {
        std::string label;
        std::vector<double> x;
        std::vector<double> y;
        std::string color;
        bool dashed = false;
    };

    LineChart(std::string title, std::string x_label, std::string y_label);

    LineChart &log_y(bool enabled = true);
    LineChart &add(Series series);
    /// Vertical reference line at x.
    LineChart &marker(double x, std::string label);

    [[nodiscard]] std::string render() const;

  private:
    std::string title_, x_label_, y_label_;
    bool log_y_ = false;
    std::vector<Series> series_;
    std::vector<std::pair<double, std::string>> markers_;
};

/// Fixed palette, cycled by index.
const std::string &palette(std::size_t index);

} // namespace rgbm::cli
