#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace levykf::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 110.0;

std::string fixed(double v, int digits = 1) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Round the axis maximum up to 1, 2 or 5 times a power of ten.
double nice_ceiling(double v) {
    if (!(v > 0.0)) return 1.0;
    const double p = std::pow(10.0, std::floor(std::log10(v)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * p >= v) return m * p;
    }
    return 10.0 * p;
}

}  // namespace

void write_error_plot(std::ostream& out, const MetricsSeries& series) {
    const std::size_t n = series.num_steps();
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    double y_max = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        y_max = std::max({y_max, series.er_mean[k], series.or_mean[k]});
    }
    y_max = nice_ceiling(y_max);
    const double x_span = n > 1 ? static_cast<double>(n - 1) : 1.0;

    auto px = [&](std::size_t k) { return kLeft + plot_w * static_cast<double>(k) / x_span; };
    auto py = [&](double v) { return kTop + plot_h * (1.0 - v / y_max); };

    auto polyline = [&](const std::vector<double>& ys, const char* color, const char* id) {
        out << "  <polyline id=\"" << id << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < n; ++k) {
            out << (k ? " " : "") << fixed(px(k), 2) << ',' << fixed(py(ys[k]), 2);
        }
        out << "\"/>\n";
    };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes, ticks and labels.
    out << "  <g stroke=\"black\" stroke-width=\"1\">\n"
        << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kTop + plot_h << "\"/>\n"
        << "    <line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\""
        << kLeft + plot_w << "\" y2=\"" << kTop + plot_h << "\"/>\n"
        << "  </g>\n";
    out << "  <g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double v = y_max * i / 5.0;
        out << "    <text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(v) + 4) << "\" text-anchor=\"end\">"
            << fixed(v, y_max < 10 ? 2 : 1) << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const auto k = static_cast<std::size_t>(std::lround(x_span * i / 5.0));
        out << "    <text x=\"" << fixed(px(k)) << "\" y=\"" << kTop + plot_h + 16
            << "\" text-anchor=\"middle\">" << k << "</text>\n";
    }
    out << "    <text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kTop + plot_h + 34
        << "\" text-anchor=\"middle\">step k</text>\n"
        << "    <text x=\"16\" y=\"" << kTop + plot_h / 2 << "\" transform=\"rotate(-90 16 "
        << kTop + plot_h / 2 << ")\" text-anchor=\"middle\">mean position error ("
        << series.num_runs << " runs)</text>\n"
        << "  </g>\n";

    polyline(series.er_mean, "#d62728", "er_mean");
    polyline(series.or_mean, "#1f77b4", "or_mean");

    const double ly = kHeight - 50;
    out << "  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "    <line x1=\"" << kLeft << "\" y1=\"" << ly << "\" x2=\"" << kLeft + 30 << "\" y2=\""
        << ly << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
        << "    <text x=\"" << kLeft + 38 << "\" y=\"" << ly + 4
        << "\">ER_k = sqrt((z1_k - x1_k)^2 + (z2_k - x2_k)^2)  (observation error)</text>\n"
        << "    <line x1=\"" << kLeft << "\" y1=\"" << ly + 22 << "\" x2=\"" << kLeft + 30
        << "\" y2=\"" << ly + 22 << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
        << "    <text x=\"" << kLeft + 38 << "\" y=\"" << ly + 26
        << "\">OR_k = sqrt((xbar1_k - x1_k)^2 + (xbar2_k - x2_k)^2)  (prior estimate error)</text>\n"
        << "  </g>\n"
        << "</svg>\n";
}

}  // namespace levykf::cli
