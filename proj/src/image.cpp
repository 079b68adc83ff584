#include "saccadelab/image.hpp"

#include <algorithm>
#include <cmath>

#include "saccadelab/errors.hpp"

namespace saccadelab {

void ImageGrid::validate() const {
    if (width <= 0 || height <= 0) throw std::domain_error("image has zero-sized extent");
    if (channels != 1 && channels != 3)
        throw DimensionError("image channel count must be 1 or 3");
    if (pixels.size() != static_cast<std::size_t>(channels) * height * width)
        throw DimensionError("pixel buffer length does not match image dimensions");
    for (float v : pixels) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
            throw std::domain_error("pixel values must be finite and in [0,1]");
    }
    if (!(dva_per_px > 0.0)) throw std::domain_error("dva_per_px must be positive");
}

ImageGrid make_constant_image(int width, int height, int channels, float value,
                              double dva_per_px) {
    ImageGrid img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.dva_per_px = dva_per_px;
    img.pixels.assign(static_cast<std::size_t>(channels) * height * width, value);
    return img;
}

std::vector<float> intensity_plane(const ImageGrid& img) {
    std::vector<float> out(static_cast<std::size_t>(img.height) * img.width, 0.0f);
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                out[static_cast<std::size_t>(y) * img.width + x] += img.at(c, y, x);
    const float inv = 1.0f / static_cast<float>(img.channels);
    for (float& v : out) v *= inv;
    return out;
}

namespace {

float sample_bilinear(const ImageGrid& img, int c, double y, double x) {
    y = std::clamp(y, 0.0, static_cast<double>(img.height - 1));
    x = std::clamp(x, 0.0, static_cast<double>(img.width - 1));
    const int y0 = static_cast<int>(std::floor(y));
    const int x0 = static_cast<int>(std::floor(x));
    const int y1 = std::min(y0 + 1, img.height - 1);
    const int x1 = std::min(x0 + 1, img.width - 1);
    const double fy = y - y0;
    const double fx = x - x0;
    const double v = (1.0 - fy) * ((1.0 - fx) * img.at(c, y0, x0) + fx * img.at(c, y0, x1)) +
                     fy * ((1.0 - fx) * img.at(c, y1, x0) + fx * img.at(c, y1, x1));
    return static_cast<float>(v);
}

} // namespace

ImageGrid resize_bilinear(const ImageGrid& img, int new_width, int new_height) {
    if (new_width <= 0 || new_height <= 0)
        throw DimensionError("resize target must be positive");
    ImageGrid out;
    out.width = new_width;
    out.height = new_height;
    out.channels = img.channels;
    out.dva_per_px = img.dva_per_px * img.width / new_width;
    out.pixels.resize(static_cast<std::size_t>(img.channels) * new_height * new_width);
    const double sy = static_cast<double>(img.height) / new_height;
    const double sx = static_cast<double>(img.width) / new_width;
    for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < new_height; ++y)
            for (int x = 0; x < new_width; ++x)
                out.at(c, y, x) = sample_bilinear(img, c, (y + 0.5) * sy - 0.5, (x + 0.5) * sx - 0.5);
    return out;
}

ImageGrid crop_clipped(const ImageGrid& img, double cx_px, double cy_px, double side_px) {
    const double half = side_px / 2.0;
    int x0 = static_cast<int>(std::lround(cx_px - half));
    int y0 = static_cast<int>(std::lround(cy_px - half));
    int x1 = static_cast<int>(std::lround(cx_px + half));
    int y1 = static_cast<int>(std::lround(cy_px + half));
    x0 = std::clamp(x0, 0, img.width);
    y0 = std::clamp(y0, 0, img.height);
    x1 = std::clamp(x1, x0 + 1, img.width);
    y1 = std::clamp(y1, y0 + 1, img.height);
    if (x0 >= img.width) x0 = img.width - 1;
    if (y0 >= img.height) y0 = img.height - 1;
    ImageGrid out;
    out.width = x1 - x0;
    out.height = y1 - y0;
    out.channels = img.channels;
    out.dva_per_px = img.dva_per_px;
    out.pixels.resize(static_cast<std::size_t>(out.channels) * out.height * out.width);
    for (int c = 0; c < img.channels; ++c)
        for (int y = y0; y < y1; ++y)
            for (int x = x0; x < x1; ++x)
                out.at(c, y - y0, x - x0) = img.at(c, y, x);
    return out;
}

} // namespace saccadelab
