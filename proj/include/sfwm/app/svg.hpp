#pragma once

#include <string>
#include <vector>

namespace sfwm::app
{
struct Series
{
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
};

struct PlotLabels
{
    std::string title;
    std::string x;
    std::string y;
};

// Histogram as a step outline. edges has counts.size() + 1 entries.
std::string step_plot_svg(std::vector<double> const& edges, std::vector<double> const& counts,
                          PlotLabels const& labels);

// Polylines; non-finite points (and non-positive ones on log axes) are skipped.
std::string line_plot_svg(std::vector<Series> const& series, PlotLabels const& labels, bool log_x = false,
                          bool log_y = false);

} // namespace sfwm::app
