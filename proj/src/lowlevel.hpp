#pragma once

// Internal low-level channel machinery shared by the builtin feature
// backend and the graph-based saliency front end.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "saccadelab/image.hpp"

namespace saccadelab::detail {

struct Plane {
    int height = 0;
    int width = 0;
    std::vector<float> values;

    float at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
    float& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
};

inline Plane make_plane(int height, int width) {
    Plane p;
    p.height = height;
    p.width = width;
    p.values.assign(static_cast<std::size_t>(height) * width, 0.0f);
    return p;
}

inline Plane downsample2(const Plane& in) {
    Plane out = make_plane(std::max(1, in.height / 2), std::max(1, in.width / 2));
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const int y0 = std::min(2 * y, in.height - 1), y1 = std::min(2 * y + 1, in.height - 1);
            const int x0 = std::min(2 * x, in.width - 1), x1 = std::min(2 * x + 1, in.width - 1);
            out.at(y, x) = 0.25f * (in.at(y0, x0) + in.at(y0, x1) + in.at(y1, x0) + in.at(y1, x1));
        }
    }
    return out;
}

// 3x3 convolution with replicated borders.
inline Plane conv3(const Plane& in, const std::array<float, 9>& kernel) {
    Plane out = make_plane(in.height, in.width);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            float acc = 0.0f;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::clamp(y + dy, 0, in.height - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, in.width - 1);
                    acc += kernel[static_cast<std::size_t>(dy + 1) * 3 + (dx + 1)] * in.at(yy, xx);
                }
            }
            out.at(y, x) = acc;
        }
    }
    return out;
}

// |value - 3x3 neighborhood mean|: local center-surround contrast.
inline Plane local_contrast(const Plane& in) {
    static const std::array<float, 9> box = {1.0f / 9, 1.0f / 9, 1.0f / 9, 1.0f / 9, 1.0f / 9,
                                             1.0f / 9, 1.0f / 9, 1.0f / 9, 1.0f / 9};
    Plane mean = conv3(in, box);
    Plane out = make_plane(in.height, in.width);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::fabs(in.values[i] - mean.values[i]);
    return out;
}

inline Plane abs_response(const Plane& in, const std::array<float, 9>& kernel) {
    Plane out = conv3(in, kernel);
    for (float& v : out.values) v = std::fabs(v);
    return out;
}

// Oriented derivative kernels at 0/45/90/135 degrees (edge orientation).
inline const std::array<std::array<float, 9>, 4> kOrientedKernels = {{
    {-0.25f, 0.0f, 0.25f, -0.5f, 0.0f, 0.5f, -0.25f, 0.0f, 0.25f},   // vertical edges
    {0.0f, 0.25f, 0.5f, -0.25f, 0.0f, 0.25f, -0.5f, -0.25f, 0.0f},   // 45 degrees
    {-0.25f, -0.5f, -0.25f, 0.0f, 0.0f, 0.0f, 0.25f, 0.5f, 0.25f},   // horizontal edges
    {0.5f, 0.25f, 0.0f, 0.25f, 0.0f, -0.25f, 0.0f, -0.25f, -0.5f},   // 135 degrees
}};

// Mean over the pixel block covering grid cell (r, c); block boundaries are
// floor(r * h / rows) so every cell owns at least one pixel when h >= rows.
inline void pool_to_grid(const Plane& plane, int rows, int cols, float* out_cell0) {
    for (int r = 0; r < rows; ++r) {
        const int y0 = static_cast<int>(static_cast<long long>(r) * plane.height / rows);
        const int y1 = std::max(
            y0 + 1, static_cast<int>(static_cast<long long>(r + 1) * plane.height / rows));
        for (int c = 0; c < cols; ++c) {
            const int x0 = static_cast<int>(static_cast<long long>(c) * plane.width / cols);
            const int x1 = std::max(
                x0 + 1, static_cast<int>(static_cast<long long>(c + 1) * plane.width / cols));
            double acc = 0.0;
            for (int y = y0; y < std::min(y1, plane.height); ++y)
                for (int x = x0; x < std::min(x1, plane.width); ++x) acc += plane.at(y, x);
            const int count = (std::min(y1, plane.height) - y0) * (std::min(x1, plane.width) - x0);
            out_cell0[static_cast<std::size_t>(r) * cols + c] =
                static_cast<float>(acc / std::max(1, count));
        }
    }
}

// Intensity plus color-opponency planes (RG, BY) for RGB inputs.
inline std::vector<Plane> base_planes(const ImageGrid& image) {
    std::vector<Plane> planes;
    Plane intensity = make_plane(image.height, image.width);
    intensity.values = intensity_plane(image);
    planes.push_back(std::move(intensity));
    if (image.channels == 3) {
        Plane rg = make_plane(image.height, image.width);
        Plane by = make_plane(image.height, image.width);
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                const float r = image.at(0, y, x), g = image.at(1, y, x), b = image.at(2, y, x);
                rg.at(y, x) = r - g;
                by.at(y, x) = b - 0.5f * (r + g);
            }
        }
        planes.push_back(std::move(rg));
        planes.push_back(std::move(by));
    }
    return planes;
}

} // namespace saccadelab::detail
