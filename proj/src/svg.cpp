#include "kacroots/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kacroots {

namespace {

constexpr double kWidth = 800, kHeight = 520;
constexpr double kLeft = 70, kRight = 30, kTop = 50, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// Largest "nice" step (1, 2 or 5 times a power of ten) giving <= 6 ticks.
double nice_step(double span) {
    if (!(span > 0)) return 1.0;
    double raw = span / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string render_svg_chart(const std::vector<ChartSeries>& series, const std::string& title,
                             const std::string& x_label, const std::string& y_label) {
    if (series.empty()) throw std::invalid_argument("render_svg_chart: no series");
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (first) throw std::invalid_argument("render_svg_chart: no points");
    if (xmax == xmin) {
        xmin -= 1;
        xmax += 1;
    }
    if (ymax == ymin) {
        ymin -= 1;
        ymax += 1;
    }
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"520\" "
           "viewBox=\"0 0 800 520\">\n";
    svg += "<rect width=\"800\" height=\"520\" fill=\"white\"/>\n";
    if (!title.empty())
        svg += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"17\">" + escape_xml(title) + "</text>\n";

    // axes
    svg += "<line x1=\"" + fmt3(kLeft) + "\" y1=\"" + fmt3(kTop + plot_h) + "\" x2=\"" +
           fmt3(kLeft + plot_w) + "\" y2=\"" + fmt3(kTop + plot_h) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt3(kLeft) + "\" y1=\"" + fmt3(kTop) + "\" x2=\"" + fmt3(kLeft) +
           "\" y2=\"" + fmt3(kTop + plot_h) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    // ticks
    double xstep = nice_step(xmax - xmin);
    for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-9 * xstep; t += xstep) {
        svg += "<line x1=\"" + fmt3(px(t)) + "\" y1=\"" + fmt3(kTop + plot_h) + "\" x2=\"" +
               fmt3(px(t)) + "\" y2=\"" + fmt3(kTop + plot_h + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt3(px(t)) + "\" y=\"" + fmt3(kTop + plot_h + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_tick(t) + "</text>\n";
    }
    double ystep = nice_step(ymax - ymin);
    for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-9 * ystep; t += ystep) {
        svg += "<line x1=\"" + fmt3(kLeft - 5) + "\" y1=\"" + fmt3(py(t)) + "\" x2=\"" +
               fmt3(kLeft) + "\" y2=\"" + fmt3(py(t)) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt3(kLeft - 9) + "\" y=\"" + fmt3(py(t) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
               fmt_tick(t) + "</text>\n";
    }
    if (!x_label.empty())
        svg += "<text x=\"" + fmt3(kLeft + plot_w / 2) + "\" y=\"" + fmt3(kHeight - 14) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
               escape_xml(x_label) + "</text>\n";
    if (!y_label.empty())
        svg += "<text x=\"18\" y=\"" + fmt3(kTop + plot_h / 2) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
               "transform=\"rotate(-90 18 " + fmt3(kTop + plot_h / 2) + ")\">" +
               escape_xml(y_label) + "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (auto [x, y] : series[i].points) {
            if (!pts.empty()) pts += ' ';
            pts += fmt3(px(x)) + "," + fmt3(py(y));
        }
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
    }

    // legend, top-right of the plot area
    double lx = kLeft + plot_w - 180, ly = kTop + 10;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        double y = ly + 18 * static_cast<double>(i);
        svg += "<line x1=\"" + fmt3(lx) + "\" y1=\"" + fmt3(y) + "\" x2=\"" + fmt3(lx + 24) +
               "\" y2=\"" + fmt3(y) + "\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt3(lx + 30) + "\" y=\"" + fmt3(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape_xml(series[i].label) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_svg(const std::vector<ChartSeries>& series, const std::string& path,
              const std::string& title, const std::string& x_label, const std::string& y_label) {
    std::string svg = render_svg_chart(series, title, x_label, y_label);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << svg;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace kacroots
