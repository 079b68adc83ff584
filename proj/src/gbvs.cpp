#include "saccadelab/gbvs.hpp"

#include <algorithm>
#include <cmath>

#include "lowlevel.hpp"
#include "saccadelab/errors.hpp"

namespace saccadelab {

using detail::Plane;

std::vector<double> gbvs_transition_matrix(const std::vector<double>& channel, int rows, int cols,
                                           double sigma_cells) {
    const int n = rows * cols;
    if (static_cast<int>(channel.size()) != n)
        throw DimensionError("transition matrix: channel size does not match grid");
    std::vector<double> matrix(static_cast<std::size_t>(n) * n, 0.0);
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma_cells * sigma_cells);
    // w(i,j): dissimilarity weighted by proximity; column j holds the
    // outgoing distribution of node j.
    for (int j = 0; j < n; ++j) {
        const int jy = j / cols, jx = j % cols;
        double col_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const int iy = i / cols, ix = i % cols;
            const double dy = iy - jy, dx = ix - jx;
            const double w =
                std::fabs(channel[i] - channel[j]) * std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
            matrix[static_cast<std::size_t>(i) * n + j] = w;
            col_sum += w;
        }
        if (col_sum > 0.0) {
            for (int i = 0; i < n; ++i) matrix[static_cast<std::size_t>(i) * n + j] /= col_sum;
        } else {
            // Isolated node (flat channel): jump anywhere.
            for (int i = 0; i < n; ++i)
                matrix[static_cast<std::size_t>(i) * n + j] = 1.0 / n;
        }
    }
    return matrix;
}

std::pair<std::vector<double>, bool> equilibrium_distribution(const std::vector<double>& matrix,
                                                              int n, double tolerance,
                                                              int max_iterations) {
    std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int it = 0; it < max_iterations; ++it) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            const double* row = matrix.data() + static_cast<std::size_t>(i) * n;
            for (int j = 0; j < n; ++j) acc += row[j] * x[static_cast<std::size_t>(j)];
            next[static_cast<std::size_t>(i)] = acc;
        }
        double sum = 0.0;
        for (double v : next) sum += v;
        if (sum > 0.0)
            for (double& v : next) v /= sum;
        double delta = 0.0;
        for (int i = 0; i < n; ++i) delta += std::fabs(next[static_cast<std::size_t>(i)] -
                                                       x[static_cast<std::size_t>(i)]);
        x.swap(next);
        if (delta < tolerance) return {x, true};
    }
    return {x, false};
}

std::vector<std::vector<double>> gbvs_channels(const ImageGrid& image, int grid_rows,
                                               int grid_cols) {
    std::vector<std::vector<double>> channels;
    std::vector<Plane> color = detail::base_planes(image);
    const int scales = 2;
    std::vector<float> cell(static_cast<std::size_t>(grid_rows) * grid_cols);
    auto pooled = [&](const Plane& p) {
        detail::pool_to_grid(p, grid_rows, grid_cols, cell.data());
        return std::vector<double>(cell.begin(), cell.end());
    };
    for (int s = 0; s < scales; ++s) {
        for (const Plane& p : color) channels.push_back(pooled(p));
        for (const auto& kernel : detail::kOrientedKernels)
            channels.push_back(pooled(detail::abs_response(color[0], kernel)));
        if (s + 1 < scales)
            for (Plane& p : color) p = detail::downsample2(p);
    }
    return channels;
}

GbvsResult gbvs_saliency(const ImageGrid& image, const GbvsOptions& options) {
    image.validate();
    int rows = std::max(1, image.height / 8);
    int cols = std::max(1, image.width / 8);
    if (std::max(rows, cols) > options.max_grid) {
        const double scale = static_cast<double>(options.max_grid) / std::max(rows, cols);
        rows = std::max(1, static_cast<int>(std::lround(rows * scale)));
        cols = std::max(1, static_cast<int>(std::lround(cols * scale)));
    }
    const int n = rows * cols;
    const double sigma_cells = 0.15 * std::sqrt(static_cast<double>(rows) * rows +
                                                static_cast<double>(cols) * cols);

    const std::vector<std::vector<double>> channels = gbvs_channels(image, rows, cols);
    std::vector<double> average(static_cast<std::size_t>(n), 0.0);
    bool all_converged = true;
    for (const std::vector<double>& channel : channels) {
        const std::vector<double> matrix = gbvs_transition_matrix(channel, rows, cols, sigma_cells);
        auto [pi, converged] =
            equilibrium_distribution(matrix, n, options.tolerance, options.max_iterations);
        all_converged = all_converged && converged;
        for (int i = 0; i < n; ++i) average[static_cast<std::size_t>(i)] += pi[static_cast<std::size_t>(i)];
    }
    double sum = 0.0;
    for (double v : average) sum += v;
    if (sum > 0.0)
        for (double& v : average) v /= sum;

    GbvsResult result;
    result.converged = all_converged;
    result.map.kind = MapKind::saliency;
    result.map.height = rows;
    result.map.width = cols;
    result.map.values = std::move(average);
    return result;
}

} // namespace saccadelab
