#pragma once

#include "trippred/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

namespace trippred {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string svg_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2e", v);
    return buf;
}

} // namespace detail

/// Static line chart of one sweep curve: estimation error against the
/// number of neighbors.
inline void write_sweep_svg(const SweepResult& r, std::ostream& out) {
    const double width = 640, height = 420;
    const double left = 80, right = 20, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double y_max = 0.0;
    for (const SweepPoint& pt : r.curve) y_max = std::max(y_max, pt.mse);
    if (y_max <= 0.0) y_max = 1.0;
    y_max *= 1.05;
    const double x_max = static_cast<double>(std::max<int>(1, r.curve.back().k));

    auto px = [&](double k) { return left + plot_w * (k / x_max); };
    auto py = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << r.config.experiment_id << " (" << to_string(r.config.variant) << ", L="
        << r.config.l_desc << ")</text>\n";

    // axes
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";

    const int n_ticks = 5;
    for (int t = 0; t <= n_ticks; ++t) {
        const double frac = static_cast<double>(t) / n_ticks;
        const double x = left + plot_w * frac;
        const double y = top + plot_h * (1.0 - frac);
        out << "<line x1=\"" << detail::svg_num(x) << "\" y1=\"" << top + plot_h << "\" x2=\""
            << detail::svg_num(x) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::svg_num(x) << "\" y=\"" << top + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"11\">" << detail::svg_num(frac * x_max)
            << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::svg_num(y) << "\" x2=\"" << left
            << "\" y2=\"" << detail::svg_num(y) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << detail::svg_num(y + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << detail::svg_sci(frac * y_max)
            << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\" font-size=\"13\">neighbors (k)</text>\n";
    out << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">mean squared error</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (const SweepPoint& pt : r.curve) {
        out << detail::svg_num(px(pt.k)) << ',' << detail::svg_num(py(pt.mse)) << ' ';
    }
    out << "\"/>\n";
    for (const SweepPoint& pt : r.curve) {
        out << "<circle cx=\"" << detail::svg_num(px(pt.k)) << "\" cy=\""
            << detail::svg_num(py(pt.mse)) << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
    }
    out << "</svg>\n";
}

inline void write_sweep_svg_file(const SweepResult& r, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    write_sweep_svg(r, out);
}

} // namespace trippred
