// Copyright 2026 The xduce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XDUCE_CLI_SVG_PLOT_H
#define XDUCE_CLI_SVG_PLOT_H

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace xduce::cli {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotAxes {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
};

namespace detail {

inline std::string xml_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace detail

/// Static 800x600 line plot with a log10 x axis. Each series becomes exactly one
/// <path>; points that cannot be drawn (non-positive x, or y on a log axis) split
/// the path into separate subpaths.
inline std::string render_svg(const std::vector<PlotSeries> &series, const PlotAxes &axes) {
    constexpr double width = 800, height = 600;
    constexpr double left = 90, right = 170, top = 50, bottom = 70;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

    auto drawable = [&](double x, double y) {
        return x > 0 && std::isfinite(x) && std::isfinite(y) && (!axes.log_y || y > 0);
    };
    auto ty = [&](double y) { return axes.log_y ? std::log10(y) : y; };

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto &s : series) {
        for (auto [x, y] : s.points) {
            if (!drawable(x, y)) {
                continue;
            }
            x_lo = std::min(x_lo, std::log10(x));
            x_hi = std::max(x_hi, std::log10(x));
            y_lo = std::min(y_lo, ty(y));
            y_hi = std::max(y_hi, ty(y));
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0;
        x_hi = 1;
        y_lo = 0;
        y_hi = 1;
    }
    if (!axes.log_y) {
        y_lo = std::min(y_lo, 0.0);
    } else {
        y_lo = std::floor(y_lo);
        y_hi = std::ceil(y_hi);
    }
    if (x_hi - x_lo <= 0) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (y_hi - y_lo <= 0) {
        y_hi = y_lo + 1;
    }
    auto px = [&](double x) { return left + (std::log10(x) - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + plot_h - (ty(y) - y_lo) / (y_hi - y_lo) * plot_h; };

    std::ostringstream svg;
    svg.precision(6);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    svg << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" << detail::xml_escape(axes.title)
        << "</text>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    // Decade ticks on x; on y, decades (log) or five even steps (linear).
    svg << "<g font-size=\"12\" stroke-width=\"0.5\">\n";
    for (double d = std::ceil(x_lo); d <= x_hi + 1e-9; d += 1) {
        double x = left + (d - x_lo) / (x_hi - x_lo) * plot_w;
        svg << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + plot_h
            << "\" stroke=\"#ccc\"/>";
        svg << "<text x=\"" << x << "\" y=\"" << top + plot_h + 18 << "\" text-anchor=\"middle\">1e"
            << static_cast<int>(d) << "</text>\n";
    }
    int y_steps = axes.log_y ? static_cast<int>(std::lround(y_hi - y_lo)) : 5;
    y_steps = std::clamp(y_steps, 1, 20);
    for (int k = 0; k <= y_steps; ++k) {
        double v = y_lo + (y_hi - y_lo) * k / y_steps;
        double y = top + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h;
        std::string label = axes.log_y ? "1e" + std::to_string(static_cast<int>(std::lround(v))) : detail::tick_label(v);
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w << "\" y2=\"" << y
            << "\" stroke=\"#ccc\"/>";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << label << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 20 << "\" text-anchor=\"middle\" font-size=\"14\">"
        << detail::xml_escape(axes.x_label) << "</text>\n";
    svg << "<text x=\"20\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
        << top + plot_h / 2 << ")\">" << detail::xml_escape(axes.y_label) << "</text>\n";

    for (size_t k = 0; k < series.size(); ++k) {
        const char *color = palette[k % std::size(palette)];
        std::ostringstream d;
        d.precision(7);
        bool pen_down = false;
        for (auto [x, y] : series[k].points) {
            if (!drawable(x, y)) {
                pen_down = false;
                continue;
            }
            d << (pen_down ? " L" : (d.tellp() > 0 ? " M" : "M")) << px(x) << ' ' << py(y);
            pen_down = true;
        }
        svg << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        double ly = top + 20 + 22 * static_cast<double>(k);
        svg << "<line x1=\"" << width - right + 15 << "\" y1=\"" << ly << "\" x2=\"" << width - right + 45 << "\" y2=\""
            << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>";
        svg << "<text x=\"" << width - right + 52 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << detail::xml_escape(series[k].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace xduce::cli

#endif
