#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "saccadelab/image.hpp"
#include "saccadelab/rng.hpp"

namespace testutil {

inline std::string temp_path(const std::string& name) {
    static const std::string dir = [] {
        auto d = std::filesystem::temp_directory_path() / "saccadelab_tests";
        std::filesystem::create_directories(d);
        return d.string();
    }();
    return dir + "/" + name;
}

inline std::string temp_dir(const std::string& name) {
    const std::string d = temp_path(name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

inline saccadelab::ImageGrid noise_image(std::uint64_t seed, int width, int height,
                                         int channels = 1, double dva_per_px = 1.0) {
    saccadelab::RngStream rng(seed);
    saccadelab::ImageGrid img = saccadelab::make_constant_image(width, height, channels, 0.0f,
                                                               dva_per_px);
    for (float& v : img.pixels) v = static_cast<float>(rng.uniform01());
    return img;
}

// Smooth blob texture: a sum of random Gaussians rescaled to [0,1]. Gives
// images with several comparably salient regions.
inline saccadelab::ImageGrid blob_texture(std::uint64_t seed, int width, int height,
                                          double dva_per_px, int blobs = 40) {
    saccadelab::RngStream rng(seed);
    std::vector<double> acc(static_cast<std::size_t>(width) * height, 0.0);
    for (int b = 0; b < blobs; ++b) {
        const double cx = rng.uniform(0.0, width);
        const double cy = rng.uniform(0.0, height);
        const double sigma = rng.uniform(width / 32.0, width / 8.0);
        const double amp = rng.uniform(-1.0, 1.0);
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                acc[static_cast<std::size_t>(y) * width + x] +=
                    amp * std::exp(-d2 / (2.0 * sigma * sigma));
            }
    }
    const auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
    saccadelab::ImageGrid img =
        saccadelab::make_constant_image(width, height, 1, 0.0f, dva_per_px);
    const double range = *hi > *lo ? *hi - *lo : 1.0;
    for (std::size_t i = 0; i < acc.size(); ++i)
        img.pixels[i] = static_cast<float>((acc[i] - *lo) / range);
    return img;
}

inline saccadelab::ImageGrid checkerboard(int size, int cell, float lo, float hi,
                                          double dva_per_px = 1.0) {
    saccadelab::ImageGrid img = saccadelab::make_constant_image(size, size, 1, lo, dva_per_px);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if (((x / cell) + (y / cell)) % 2 == 0) img.at(0, y, x) = hi;
    return img;
}

inline void plant_patch(saccadelab::ImageGrid& canvas, const saccadelab::ImageGrid& patch,
                        int x0, int y0) {
    for (int c = 0; c < canvas.channels; ++c)
        for (int y = 0; y < patch.height; ++y)
            for (int x = 0; x < patch.width; ++x)
                canvas.at(c, y0 + y, x0 + x) = patch.at(std::min(c, patch.channels - 1), y, x);
}

// Synthetic free-viewing corpus for the qualitative reproduction suites.
// Even seeds give a sparse scene (one bright dot pair a couple of degrees
// apart, the flip-back regime); odd seeds give a rich scene (a dozen
// scattered dots, the exploration regime). Dots sit on cell centers of the
// /8 working grid and a weak smooth background supplies texture.
inline saccadelab::ImageGrid acceptance_texture(std::uint64_t seed, int size = 256,
                                                double dva_per_px = 0.125) {
    saccadelab::RngStream rng(seed * 7919 + 13);
    std::vector<double> acc(static_cast<std::size_t>(size) * size, 0.0);
    auto add_blob = [&](double cx, double cy, double sigma, double amp) {
        const int x0 = std::max(0, static_cast<int>(cx - 4 * sigma));
        const int x1 = std::min(size - 1, static_cast<int>(cx + 4 * sigma));
        const int y0 = std::max(0, static_cast<int>(cy - 4 * sigma));
        const int y1 = std::min(size - 1, static_cast<int>(cy + 4 * sigma));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                acc[static_cast<std::size_t>(y) * size + x] +=
                    amp * std::exp(-d2 / (2 * sigma * sigma));
            }
    };
    for (int b = 0; b < 8; ++b)
        add_blob(rng.uniform(0.0, size), rng.uniform(0.0, size), rng.uniform(25.0, 60.0),
                 rng.uniform(-0.08, 0.08));
    auto snap = [](int cell) { return cell * 8 + 4.0; };
    const int cells = size / 8;
    if (seed % 2 == 0) {
        const int r = 6 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cells - 12)));
        const int c = 6 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cells - 12)));
        static const int dirs[8][2] = {{2, 0}, {-2, 0}, {0, 2}, {0, -2},
                                       {2, 2}, {2, -2}, {-2, 2}, {-2, -2}};
        const int* d = dirs[rng.uniform_index(8)];
        add_blob(snap(c), snap(r), 2.0, rng.uniform(0.9, 1.0));
        add_blob(snap(c + d[1]), snap(r + d[0]), 2.0, rng.uniform(0.85, 0.95));
    } else {
        std::vector<int> rs, cc;
        for (int b = 0; b < 12; ++b) {
            for (int attempt = 0; attempt < 100; ++attempt) {
                const int r = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cells - 4)));
                const int c = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cells - 4)));
                bool ok = true;
                for (std::size_t i = 0; i < rs.size(); ++i)
                    if (std::abs(r - rs[i]) < 3 && std::abs(c - cc[i]) < 3) {
                        ok = false;
                        break;
                    }
                if (!ok) continue;
                rs.push_back(r);
                cc.push_back(c);
                add_blob(snap(c), snap(r), 2.0, rng.uniform(0.75, 1.0));
                break;
            }
        }
    }
    const auto [lo, hi] = std::minmax_element(acc.begin(), acc.end());
    saccadelab::ImageGrid img =
        saccadelab::make_constant_image(size, size, 1, 0.0f, dva_per_px);
    const double range = *hi > *lo ? *hi - *lo : 1.0;
    for (std::size_t i = 0; i < acc.size(); ++i)
        img.pixels[i] = static_cast<float>((acc[i] - *lo) / range);
    return img;
}

// Search trial with a verbatim one-cell checkerboard plant on a flat field,
// at a seed-dependent cell away from the center. Returns the scene, target
// and the plant's bounding box in dva.
struct PlantedScene {
    saccadelab::ImageGrid scene;
    saccadelab::ImageGrid target;
    saccadelab::RectDva box;
};

inline PlantedScene planted_search_scene(std::uint64_t seed, int size = 256,
                                         double dva_per_px = 0.125) {
    saccadelab::RngStream rng(seed * 31 + 7);
    PlantedScene out;
    out.scene = saccadelab::make_constant_image(size, size, 1, 0.5f, dva_per_px);
    out.target = saccadelab::make_constant_image(8, 8, 1, 0.5f, dva_per_px);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x)
            out.target.at(0, y, x) = ((x / 2) + (y / 2)) % 2 ? 0.1f : 0.9f;
    const int cells = size / 8;
    int cr, cc;
    do {
        cr = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cells - 4)));
        cc = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(cells - 4)));
    } while (std::abs(cr - cells / 2) < 5 && std::abs(cc - cells / 2) < 5);
    plant_patch(out.scene, out.target, cc * 8, cr * 8);
    const double cell_dva = 8.0 * dva_per_px;
    out.box = {cc * cell_dva, cr * cell_dva, (cc + 1) * cell_dva, (cr + 1) * cell_dva};
    return out;
}

} // namespace testutil
