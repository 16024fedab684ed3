#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vclod/csv.hpp"
#include "vclod/psychofit.hpp"

namespace vclod {

struct PfSeries {
    std::string label;
    std::string color;
    std::vector<ResponseCell> points;
    PsychometricFit fit;
};

namespace detail {

inline std::string svg_num(double v) {
    // two decimals are plenty for pixel coordinates and keep files stable
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace detail

// Static psychometric-function chart: proportion-correct points, the
// fitted curves, and dashed 75%-threshold markers per series.
inline std::string render_pf_svg(const std::vector<PfSeries>& series, const std::string& title,
                                 std::uint64_t seed) {
    constexpr double width = 640, height = 460;
    constexpr double ml = 70, mr = 24, mt = 48, mb = 58;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;

    double x_min = 1e300, x_max = -1e300;
    for (const PfSeries& s : series)
        for (const ResponseCell& c : s.points) {
            x_min = std::min(x_min, c.aggressiveness_pct);
            x_max = std::max(x_max, c.aggressiveness_pct);
        }
    if (!(x_min < x_max)) {
        x_min = 0.0;
        x_max = 100.0;
    }
    const double pad = 0.05 * (x_max - x_min);
    x_min -= pad;
    x_max += pad;
    const double y_min = 0.4, y_max = 1.0;

    const auto sx = [&](double a) { return ml + (a - x_min) / (x_max - x_min) * plot_w; };
    const auto sy = [&](double p) { return mt + (y_max - p) / (y_max - y_min) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<desc>" << kToolName << " " << kVersion << " seed=" << seed << "</desc>\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // horizontal grid and y labels
    for (double p : {0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.9, 1.0}) {
        const double y = sy(p);
        svg << "<line x1=\"" << detail::svg_num(ml) << "\" y1=\"" << detail::svg_num(y)
            << "\" x2=\"" << detail::svg_num(ml + plot_w) << "\" y2=\"" << detail::svg_num(y)
            << "\" stroke=\"" << (p == 0.75 ? "#bbbbbb" : "#e6e6e6") << "\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << detail::svg_num(ml - 8) << "\" y=\"" << detail::svg_num(y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">"
            << detail::svg_num(p) << "</text>\n";
    }
    // x ticks at data levels of the first series
    if (!series.empty()) {
        for (const ResponseCell& c : series.front().points) {
            const double x = sx(c.aggressiveness_pct);
            svg << "<line x1=\"" << detail::svg_num(x) << "\" y1=\"" << detail::svg_num(mt + plot_h)
                << "\" x2=\"" << detail::svg_num(x) << "\" y2=\""
                << detail::svg_num(mt + plot_h + 5) << "\" stroke=\"#444444\"/>\n";
            svg << "<text x=\"" << detail::svg_num(x) << "\" y=\""
                << detail::svg_num(mt + plot_h + 20)
                << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
                << detail::svg_num(c.aggressiveness_pct) << "</text>\n";
        }
    }

    svg << "<rect x=\"" << detail::svg_num(ml) << "\" y=\"" << detail::svg_num(mt) << "\" width=\""
        << detail::svg_num(plot_w) << "\" height=\"" << detail::svg_num(plot_h)
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";

    double legend_y = mt + 16;
    for (const PfSeries& s : series) {
        if (s.fit.converged) {
            svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
            const int steps = 200;
            for (int i = 0; i <= steps; ++i) {
                const double a = x_min + (x_max - x_min) * i / steps;
                const double p = std::clamp(psychometric(a, s.fit.mu, s.fit.sigma), y_min, y_max);
                svg << detail::svg_num(sx(a)) << "," << detail::svg_num(sy(p)) << " ";
            }
            svg << "\"/>\n";
            // 75% threshold marker (equals the fitted mean)
            const double xt = sx(threshold(s.fit, 0.75));
            svg << "<line x1=\"" << detail::svg_num(xt) << "\" y1=\"" << detail::svg_num(sy(y_min))
                << "\" x2=\"" << detail::svg_num(xt) << "\" y2=\"" << detail::svg_num(sy(0.75))
                << "\" stroke=\"" << s.color << "\" stroke-dasharray=\"5,4\"/>\n";
        }
        for (const ResponseCell& c : s.points) {
            const double p = c.n_trials > 0 ? static_cast<double>(c.n_correct) / c.n_trials : 0.0;
            svg << "<circle cx=\"" << detail::svg_num(sx(c.aggressiveness_pct)) << "\" cy=\""
                << detail::svg_num(sy(std::clamp(p, y_min, y_max))) << "\" r=\"4\" fill=\""
                << s.color << "\" fill-opacity=\"0.8\"/>\n";
        }
        svg << "<text x=\"" << detail::svg_num(ml + 12) << "\" y=\"" << detail::svg_num(legend_y)
            << "\" font-family=\"sans-serif\" font-size=\"13\" fill=\"" << s.color << "\">"
            << s.label << "</text>\n";
        legend_y += 17;
    }

    svg << "<text x=\"" << detail::svg_num(width / 2) << "\" y=\"" << detail::svg_num(mt - 18)
        << "\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">" << title
        << "</text>\n";
    svg << "<text x=\"" << detail::svg_num(ml + plot_w / 2) << "\" y=\""
        << detail::svg_num(height - 14)
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
        << "LOD aggressiveness (% triangles removed)</text>\n";
    svg << "<text transform=\"translate(18," << detail::svg_num(mt + plot_h / 2)
        << ") rotate(-90)\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
        << "proportion correct</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

inline void write_pf_svg(const std::filesystem::path& path, const std::vector<PfSeries>& series,
                         const std::string& title, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const std::string text = render_pf_svg(series, title, seed);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace vclod
