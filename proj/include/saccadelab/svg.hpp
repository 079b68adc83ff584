#pragma once

#include <string>

#include "saccadelab/metrics.hpp"

namespace saccadelab {

/// Minimal SVG bar/histogram renderer: axes, bars, tick labels, title.
/// Output is deterministic byte-for-byte for identical inputs.
std::string svg_histogram(const Histogram& histogram, const std::string& title,
                          const std::string& x_label, const std::string& y_label);

/// Labeled bar chart (one bar per category).
std::string svg_bars(const std::vector<std::string>& labels, const std::vector<double>& values,
                     const std::string& title, const std::string& y_label);

} // namespace saccadelab
