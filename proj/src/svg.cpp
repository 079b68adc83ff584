#include "saccadelab/svg.hpp"

#include <algorithm>
#include <cstdio>

namespace saccadelab {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

void open_chart(std::string& svg, const std::string& title, const std::string& y_label) {
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    svg += "<rect width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + num(kWidth / 2) +
           "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(title) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + num(kHeight / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
           num(kHeight / 2) + ")\">" + escape(y_label) + "</text>\n";
    // Axes.
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(kHeight - kBottom) +
           "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
           "\" y2=\"" + num(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
}

} // namespace

std::string svg_histogram(const Histogram& histogram, const std::string& title,
                          const std::string& x_label, const std::string& y_label) {
    std::string svg;
    open_chart(svg, title, y_label);
    svg += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" + num(kHeight - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           escape(x_label) + "</text>\n";

    const std::size_t n = histogram.values.size();
    double vmax = 0.0;
    for (double v : histogram.values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    const double x0 = histogram.bin_edges.front();
    const double x1 = histogram.bin_edges.back();
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    for (std::size_t i = 0; i < n; ++i) {
        const double bx0 = kLeft + (histogram.bin_edges[i] - x0) / (x1 - x0) * plot_w;
        const double bx1 = kLeft + (histogram.bin_edges[i + 1] - x0) / (x1 - x0) * plot_w;
        const double h = histogram.values[i] / vmax * plot_h;
        svg += "<rect x=\"" + num(bx0) + "\" y=\"" + num(kHeight - kBottom - h) + "\" width=\"" +
               num(std::max(0.5, bx1 - bx0 - 1.0)) + "\" height=\"" + num(h) +
               "\" fill=\"#4878a8\"/>\n";
    }
    // Edge tick labels.
    svg += "<text x=\"" + num(kLeft) + "\" y=\"" + num(kHeight - kBottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + num(x0) +
           "</text>\n";
    svg += "<text x=\"" + num(kWidth - kRight) + "\" y=\"" + num(kHeight - kBottom + 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" + num(x1) +
           "</text>\n";
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(vmax) +
           "</text>\n";
    svg += "</svg>\n";
    return svg;
}

std::string svg_bars(const std::vector<std::string>& labels, const std::vector<double>& values,
                     const std::string& title, const std::string& y_label) {
    std::string svg;
    open_chart(svg, title, y_label);
    const std::size_t n = values.size();
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double slot = plot_w / std::max<std::size_t>(1, n);

    for (std::size_t i = 0; i < n; ++i) {
        const double bx = kLeft + slot * static_cast<double>(i) + slot * 0.15;
        const double h = std::max(0.0, values[i]) / vmax * plot_h;
        svg += "<rect x=\"" + num(bx) + "\" y=\"" + num(kHeight - kBottom - h) + "\" width=\"" +
               num(slot * 0.7) + "\" height=\"" + num(h) + "\" fill=\"#4878a8\"/>\n";
        svg += "<text x=\"" + num(bx + slot * 0.35) + "\" y=\"" + num(kHeight - kBottom + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               escape(i < labels.size() ? labels[i] : "") + "</text>\n";
    }
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(kTop + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + num(vmax) +
           "</text>\n";
    svg += "</svg>\n";
    return svg;
}

} // namespace saccadelab
