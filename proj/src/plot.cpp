#include "teig/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace teig {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 70, kRight = 190, kTop = 40, kBottom = 50;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
                                   "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_log_plot_svg(std::ostream& os, const std::vector<PlotSeries>& series, const std::string& title,
                        const std::string& y_label) {
    double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    std::size_t kmax = 1;
    for (const auto& s : series) {
        kmax = std::max(kmax, s.y.size() > 0 ? s.y.size() - 1 : 0);
        for (double v : s.y)
            if (v > 0 && std::isfinite(v)) {
                ymin = std::min(ymin, std::log10(v));
                ymax = std::max(ymax, std::log10(v));
            }
    }
    if (!std::isfinite(ymin)) ymin = -1, ymax = 0;
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax <= ymin) ymax = ymin + 1;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto X = [&](double k) { return kLeft + pw * k / static_cast<double>(kmax); };
    auto Y = [&](double v) { return kTop + ph * (ymax - v) / (ymax - ymin); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double ystep = std::max(1.0, std::ceil((ymax - ymin) / 10.0));
    for (double v = ymin; v <= ymax + 1e-9; v += ystep)
        os << "<line x1=\"" << kLeft - 4 << "\" x2=\"" << kLeft << "\" y1=\"" << Y(v) << "\" y2=\"" << Y(v)
           << "\" stroke=\"black\"/><text x=\"" << kLeft - 8 << "\" y=\"" << Y(v) + 4
           << "\" text-anchor=\"end\">" << v << "</text>\n";
    const double kstep = std::max(1.0, std::ceil(static_cast<double>(kmax) / 10.0));
    for (double k = 0; k <= static_cast<double>(kmax) + 1e-9; k += kstep)
        os << "<line x1=\"" << X(k) << "\" x2=\"" << X(k) << "\" y1=\"" << kTop + ph << "\" y2=\"" << kTop + ph + 4
           << "\" stroke=\"black\"/><text x=\"" << X(k) << "\" y=\"" << kTop + ph + 18
           << "\" text-anchor=\"middle\">" << k << "</text>\n";
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">k</text>\n";
    os << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < series[i].y.size(); ++k) {
            const double v = series[i].y[k];
            if (v > 0 && std::isfinite(v)) os << X(static_cast<double>(k)) << ',' << Y(std::log10(v)) << ' ';
        }
        os << "\"/>\n";
        const double ly = kTop + 16 + 18 * static_cast<double>(i);
        os << "<line x1=\"" << kWidth - kRight + 12 << "\" x2=\"" << kWidth - kRight + 36 << "\" y1=\"" << ly
           << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\""
           << kWidth - kRight + 42 << "\" y=\"" << ly + 4 << "\">" << escape(series[i].label) << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace teig
