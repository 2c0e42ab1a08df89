#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace teig {

struct PlotSeries {
    std::string label;
    std::vector<double> y;
};

/// Line chart of log10(y) against the index k for every series on one axis,
/// written as a standalone SVG document. Non-positive values are skipped.
void write_log_plot_svg(std::ostream& os, const std::vector<PlotSeries>& series, const std::string& title,
                        const std::string& y_label = "log10 delta_k");

} // namespace teig
