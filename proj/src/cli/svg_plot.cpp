#include "cli/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace rgbm::cli {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 78, kRight = 180, kTop = 40, kBottom = 56;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Round tick step covering `span` with about `target` intervals.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

} // namespace

const std::string &palette(std::size_t index) {
    static const std::array<std::string, 10> colors = {
        "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[index % colors.size()];
}

LineChart::LineChart(std::string title, std::string x_label, std::string y_label)
    : title_{std::move(title)}, x_label_{std::move(x_label)}, y_label_{std::move(y_label)} {}

LineChart &LineChart::log_y(bool enabled) {
    log_y_ = enabled;
    return *this;
}

LineChart &LineChart::add(Series series) {
    series_.push_back(std::move(series));
    return *this;
}

LineChart &LineChart::marker(double x, std::string label) {
    markers_.emplace_back(x, std::move(label));
    return *this;
}

std::string LineChart::render() const {
    auto ty = [&](double y) { return log_y_ ? std::log10(y) : y; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!log_y_ || y > 0.0);
    };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto &s : series_) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) {
                continue;
            }
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    }
    if (x1 == x0) {
        x1 = x0 + 1;
    }
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(title_) << "</text>\n";

    // Axes and ticks.
    svg << "<g stroke=\"black\" fill=\"none\"><rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop)
        << "\" width=\"" << num(pw) << "\" height=\"" << num(ph) << "\"/></g>\n";
    const double xs = nice_step(x1 - x0, 8);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        svg << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(t))
            << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>"
            << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kTop + ph + 19)
            << "\" text-anchor=\"middle\">" << tick_text(t) << "</text>\n";
    }
    const double ys = nice_step(y1 - y0, 6);
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        const double label = log_y_ ? std::pow(10.0, t) : (std::abs(t) < 1e-12 * ys ? 0.0 : t);
        svg << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(kLeft + pw)
            << "\" y2=\"" << num(py(t)) << "\" stroke=\"#dddddd\"/>"
            << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(t) + 4)
            << "\" text-anchor=\"end\">" << tick_text(label) << "</text>\n";
    }
    svg << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\">" << escape(x_label_) << "</text>\n";
    svg << "<text transform=\"translate(18," << num(kTop + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label_)
        << (log_y_ ? " (log scale)" : "") << "</text>\n";

    for (const auto &[x, label] : markers_) {
        if (x < x0 || x > x1) {
            continue;
        }
        svg << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(x))
            << "\" y2=\"" << num(kTop + ph) << "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>"
            << "<text x=\"" << num(px(x) + 4) << "\" y=\"" << num(kTop + 14) << "\">"
            << escape(label) << "</text>\n";
    }

    for (const auto &s : series_) {
        std::string points;
        auto flush = [&] {
            if (!points.empty()) {
                svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.6\""
                    << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << points
                    << "\"/>\n";
                points.clear();
            }
        };
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) {
                flush();
                continue;
            }
            points += (points.empty() ? "" : " ") + num(px(s.x[i])) + "," + num(py(ty(s.y[i])));
        }
        flush();
    }

    double ly = kTop + 10;
    for (const auto &s : series_) {
        svg << "<line x1=\"" << num(kWidth - kRight + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
            << num(kWidth - kRight + 36) << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>"
            << "<text x=\"" << num(kWidth - kRight + 42) << "\" y=\"" << num(ly + 4) << "\">"
            << escape(s.label) << "</text>\n";
        ly += 18;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace rgbm::cli
