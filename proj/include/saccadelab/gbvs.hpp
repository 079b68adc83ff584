#pragma once

#include <vector>

#include "saccadelab/image.hpp"
#include "saccadelab/tensor.hpp"

namespace saccadelab {

struct GbvsResult {
    AttentionMap map;     // probability distribution (>= 0, sums to 1)
    bool converged = true;
};

struct GbvsOptions {
    double tolerance = 1e-6; // L1 step delta
    int max_iterations = 1000;
    int max_grid = 32;       // cap on the longer side of the working grid
};

/// Column-stochastic transition matrix of the fully connected activation
/// graph for one channel: w(i,j) = |v_i - v_j| * exp(-d(i,j)^2 / (2 sigma^2))
/// with d in cells. A column with no outgoing mass becomes uniform.
std::vector<double> gbvs_transition_matrix(const std::vector<double>& channel,
                                           int rows, int cols, double sigma_cells);

/// Equilibrium distribution of a column-stochastic matrix by power
/// iteration from the uniform start. Returns the last iterate and whether
/// the L1 step delta dropped below the tolerance.
std::pair<std::vector<double>, bool> equilibrium_distribution(
    const std::vector<double>& matrix, int n, double tolerance, int max_iterations);

/// Low-level channels on the GBVS working grid (intensity, color opponency
/// for RGB inputs, oriented derivative energies; 2 scales).
std::vector<std::vector<double>> gbvs_channels(const ImageGrid& image, int grid_rows,
                                               int grid_cols);

/// Graph-based bottom-up saliency: per-channel equilibrium distributions,
/// channel-averaged and renormalized to sum 1.
GbvsResult gbvs_saliency(const ImageGrid& image, const GbvsOptions& options = {});

} // namespace saccadelab
