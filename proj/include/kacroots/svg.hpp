#pragma once
#include <string>
#include <utility>
#include <vector>

namespace kacroots {

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Self-contained SVG line chart: axes, ticks, legend, one polyline per
/// series.  Output bytes are a pure function of the input (coordinates are
/// rounded to 3 decimals).
std::string render_svg_chart(const std::vector<ChartSeries>& series, const std::string& title,
                             const std::string& x_label, const std::string& y_label);

/// Renders and writes the chart; IO failures are reported with the path.
void emit_svg(const std::vector<ChartSeries>& series, const std::string& path,
              const std::string& title = "", const std::string& x_label = "",
              const std::string& y_label = "");

}  // namespace kacroots
