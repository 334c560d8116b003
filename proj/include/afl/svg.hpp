#pragma once

// Minimal static line plots: 960x540 viewport, linear axes, polylines and a
// legend. One or more panels laid out side by side.

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace afl::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
};

inline constexpr int width = 960;
inline constexpr int height = 540;

namespace detail {

inline const char* color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return palette[i % (sizeof(palette) / sizeof(palette[0]))];
}

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

inline void write(std::ostream& os, const std::vector<Panel>& panels) {
    using detail::num;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const std::size_t n = std::max<std::size_t>(1, panels.size());
    const double panel_w = static_cast<double>(width) / static_cast<double>(n);
    const double legend_h = 70.0;

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const Panel& panel = panels[p];
        const double left = p * panel_w + 55.0;
        const double right = (p + 1) * panel_w - 15.0;
        const double top = 35.0;
        const double bottom = height - 45.0 - legend_h;

        double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
        double ymin = xmin, ymax = -xmin;
        for (const auto& s : panel.series) {
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                    continue;
                }
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
        if (!std::isfinite(xmin)) {
            xmin = 0, xmax = 1, ymin = 0, ymax = 1;
        }
        if (xmax == xmin) {
            xmax = xmin + 1.0;
        }
        if (ymax - ymin < 1e-12 * std::max(1.0, std::abs(ymax))) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;

        const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
        const auto sy = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

        os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
        os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(right - left)
           << "\" height=\"" << num(bottom - top) << "\" fill=\"none\" stroke=\"black\"/>\n";
        os << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">"
           << detail::escape(panel.title) << "</text>\n";
        for (int k = 0; k <= 4; ++k) {
            const double xv = xmin + k * (xmax - xmin) / 4.0;
            const double yv = ymin + k * (ymax - ymin) / 4.0;
            os << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(bottom + 14) << "\" text-anchor=\"middle\">"
               << num(xv) << "</text>\n";
            os << "<text x=\"" << num(left - 4) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">"
               << num(yv) << "</text>\n";
        }
        os << "<text x=\"" << num(0.5 * (left + right)) << "\" y=\"" << num(bottom + 30)
           << "\" text-anchor=\"middle\">" << detail::escape(panel.x_label) << "</text>\n";
        os << "<text x=\"" << num(left - 40) << "\" y=\"" << num(0.5 * (top + bottom)) << "\" transform=\"rotate(-90 "
           << num(left - 40) << ' ' << num(0.5 * (top + bottom)) << ")\" text-anchor=\"middle\">"
           << detail::escape(panel.y_label) << "</text>\n";

        for (std::size_t s = 0; s < panel.series.size(); ++s) {
            const Series& series = panel.series[s];
            os << "<polyline fill=\"none\" stroke=\"" << detail::color(s) << "\" stroke-width=\"1.5\"";
            if (series.dashed) {
                os << " stroke-dasharray=\"5,3\"";
            }
            os << " points=\"";
            for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
                if (std::isfinite(series.x[i]) && std::isfinite(series.y[i])) {
                    os << num(sx(series.x[i])) << ',' << num(sy(series.y[i])) << ' ';
                }
            }
            os << "\"/>\n";
            const double ly = bottom + 45 + 13.0 * static_cast<double>(s % 4);
            const double lx = left + static_cast<double>(s / 4) * 150.0;
            os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 20) << "\" y2=\""
               << num(ly - 4) << "\" stroke=\"" << detail::color(s) << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << num(lx + 24) << "\" y=\"" << num(ly) << "\">" << detail::escape(series.label)
               << "</text>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
}

}  // namespace afl::svg
