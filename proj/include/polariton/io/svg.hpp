#pragma once

// Minimal SVG line plot: one polyline per series on shared linear axes.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace polariton::io {

struct SvgSeries
{
    std::string label;
    std::vector<std::pair<double, double>> points;
    bool dashed = false;
};

inline std::string svg_line_plot(const std::vector<SvgSeries> &series, const std::string &x_label,
                                 const std::string &y_label, int width = 640, int height = 480)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto &s : series)
        for (const auto &[x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!(x1 > x0)) {
        x0 = 0.0;
        x1 = 1.0;
    }
    if (!(y1 > y0)) {
        y0 = 0.0;
        y1 = 1.0;
    }
    const double left = 70, right = 20, top = 20, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };
    auto num = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", v);
        return std::string(b);
    };
    auto sci = [](double v) {
        char b[32];
        std::snprintf(b, sizeof b, "%.3g", v);
        return std::string(b);
    };

    static const char *colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x0 + (x1 - x0) * t / 4.0, fy = y0 + (y1 - y0) * t / 4.0;
        os << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(top + ph + 18) << "\" font-size=\"11\" text-anchor=\"middle\">"
           << sci(fx) << "</text>\n";
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(fy) + 4) << "\" font-size=\"11\" text-anchor=\"end\">"
           << sci(fy) << "</text>\n";
    }
    os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 10.0) << "\" font-size=\"13\" text-anchor=\"middle\">"
       << x_label << "</text>\n";
    os << "<text x=\"16\" y=\"" << num(top + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << num(top + ph / 2) << ")\">" << y_label << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto &s = series[i];
        if (s.points.empty())
            continue;
        os << "<polyline fill=\"none\" stroke=\"" << colors[i % 7] << "\" stroke-width=\"1.5\""
           << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (const auto &[x, y] : s.points)
            os << num(px(x)) << "," << num(py(y)) << " ";
        os << "\"><title>" << s.label << "</title></polyline>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace polariton::io
