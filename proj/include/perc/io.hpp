#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "perc/errors.hpp"

namespace perc {

// Shortest round-trippable decimal form of a double.
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Comma-separated rows with '#' comment lines. Callers keep every emitted
// value deterministic except an explicit timestamp comment, so bodies of
// repeated runs compare byte-equal.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << "\n";
    }

  private:
    std::ostream& out_;
};

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

inline std::string fmt_coord(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string fmt_tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

} // namespace detail

// Self-contained SVG line chart: axes, ticks, one polyline per series, legend.
inline void svg_line_plot(std::ostream& out, const std::string& title, const std::string& x_label,
                          const std::string& y_label, const std::vector<PlotSeries>& series) {
    const double width = 800, height = 500;
    const double ml = 70, mr = 24, mt = 40, mb = 52;

    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool any = false;
    for (const PlotSeries& s : series)
        for (auto [x, y] : s.points) {
            if (!any) {
                x0 = x1 = x;
                y0 = y1 = y;
                any = true;
            }
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (x0 == x1) {
        x0 -= 1;
        x1 += 1;
    }
    if (y0 == y1) {
        y0 -= 1;
        y1 += 1;
    }
    auto px = [&](double x) { return ml + (x - x0) / (x1 - x0) * (width - ml - mr); };
    auto py = [&](double y) { return height - mb - (y - y0) / (y1 - y0) * (height - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    const int ncolors = 6;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << detail::xml_escape(title) << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        double fx = x0 + (x1 - x0) * t / 5.0;
        double fy = y0 + (y1 - y0) * t / 5.0;
        out << "<line x1=\"" << detail::fmt_coord(px(fx)) << "\" y1=\"" << height - mb
            << "\" x2=\"" << detail::fmt_coord(px(fx)) << "\" y2=\"" << height - mb + 5
            << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::fmt_coord(px(fx)) << "\" y=\"" << height - mb + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::fmt_tick(fx) << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::fmt_coord(py(fy)) << "\" x2=\""
            << ml << "\" y2=\"" << detail::fmt_coord(py(fy)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << detail::fmt_coord(py(fy) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << detail::fmt_tick(fy) << "</text>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << detail::xml_escape(x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (mt + height - mb) / 2 << ")\">" << detail::xml_escape(y_label) << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = colors[s % ncolors];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : series[s].points)
            out << detail::fmt_coord(px(x)) << "," << detail::fmt_coord(py(y)) << " ";
        out << "\"/>\n";
        for (auto [x, y] : series[s].points)
            out << "<circle cx=\"" << detail::fmt_coord(px(x)) << "\" cy=\""
                << detail::fmt_coord(py(y)) << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        double ly = mt + 16 * static_cast<double>(s);
        out << "<line x1=\"" << width - mr - 150 << "\" y1=\"" << ly << "\" x2=\""
            << width - mr - 130 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << width - mr - 124 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << detail::xml_escape(series[s].name)
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace perc
