#pragma once

#include <vector>

#include "saccadelab/geometry.hpp"

namespace saccadelab {

/// Raster image with a pixel-to-dva scale. Pixels are channel-major
/// row-major values in [0,1]; 1 channel (gray) or 3 (RGB).
struct ImageGrid {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<float> pixels;
    double dva_per_px = 1.0;

    float at(int c, int y, int x) const {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float& at(int c, int y, int x) {
        return pixels[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    double width_dva() const { return width * dva_per_px; }
    double height_dva() const { return height * dva_per_px; }

    /// Throws if any invariant is violated (shape, range, finiteness, scale).
    void validate() const;
};

/// Constant-valued image, mainly for tests and synthetic stimuli.
ImageGrid make_constant_image(int width, int height, int channels, float value,
                              double dva_per_px = 1.0);

/// Mean over channels; identity for grayscale.
std::vector<float> intensity_plane(const ImageGrid& img);

/// Bilinear resample to new dimensions, preserving channel count.
/// dva_per_px is rescaled so the physical extent is unchanged.
ImageGrid resize_bilinear(const ImageGrid& img, int new_width, int new_height);

/// Axis-aligned crop, clipped at the borders. The requested square is
/// centered at (cx_px, cy_px) with the given side.
ImageGrid crop_clipped(const ImageGrid& img, double cx_px, double cy_px, double side_px);

} // namespace saccadelab
