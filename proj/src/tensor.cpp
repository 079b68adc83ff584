#include "saccadelab/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "saccadelab/errors.hpp"

namespace saccadelab {

void FeatureTensor::validate() const {
    if (channels <= 0 || height <= 0 || width <= 0)
        throw DimensionError("feature tensor dimensions must be positive");
    if (values.size() != static_cast<std::size_t>(channels) * height * width)
        throw DimensionError("feature tensor value count does not match dimensions");
    for (float v : values)
        if (!std::isfinite(v)) throw std::domain_error("feature tensor values must be finite");
    if (!(stride_px >= 1.0)) throw std::domain_error("feature stride must be >= 1 pixel");
}

std::string to_string(MapKind kind) {
    switch (kind) {
        case MapKind::saliency: return "saliency";
        case MapKind::similarity: return "similarity";
        case MapKind::saccade: return "saccade";
        case MapKind::memory: return "memory";
        case MapKind::combined: return "combined";
        case MapKind::recognition: return "recognition";
    }
    return "saliency";
}

void AttentionMap::validate() const {
    if (height <= 0 || width <= 0) throw DimensionError("map dimensions must be positive");
    if (values.size() != static_cast<std::size_t>(height) * width)
        throw DimensionError("map value count does not match dimensions");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        if (!std::isfinite(v)) throw std::domain_error("map values must be finite");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (normalized && (lo < 0.0 || hi > 1.0))
        throw std::domain_error("normalized map values must lie in [0,1]");
}

AttentionMap normalize_map(const AttentionMap& map) {
    AttentionMap out = map;
    out.normalized = true;
    if (map.values.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi == lo) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    const double range = hi - lo;
    for (double& v : out.values) v = (v - lo) / range;
    return out;
}

AttentionMap resample_bilinear(const AttentionMap& map, int new_height, int new_width) {
    if (new_height <= 0 || new_width <= 0)
        throw DimensionError("resample target must be positive");
    if (new_height == map.height && new_width == map.width) return map;
    AttentionMap out;
    out.height = new_height;
    out.width = new_width;
    out.kind = map.kind;
    out.normalized = map.normalized;
    out.values.resize(static_cast<std::size_t>(new_height) * new_width);
    const double sy = static_cast<double>(map.height) / new_height;
    const double sx = static_cast<double>(map.width) / new_width;
    for (int y = 0; y < new_height; ++y) {
        for (int x = 0; x < new_width; ++x) {
            double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(map.height - 1));
            double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(map.width - 1));
            const int y0 = static_cast<int>(std::floor(fy));
            const int x0 = static_cast<int>(std::floor(fx));
            const int y1 = std::min(y0 + 1, map.height - 1);
            const int x1 = std::min(x0 + 1, map.width - 1);
            const double wy = fy - y0, wx = fx - x0;
            out.at(y, x) = (1.0 - wy) * ((1.0 - wx) * map.at(y0, x0) + wx * map.at(y0, x1)) +
                           wy * ((1.0 - wx) * map.at(y1, x0) + wx * map.at(y1, x1));
        }
    }
    return out;
}

std::size_t argmax_index(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

} // namespace saccadelab
