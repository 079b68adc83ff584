#pragma once

#include <vector>

#include "saccadelab/geometry.hpp"
#include "saccadelab/rng.hpp"
#include "saccadelab/scanpath.hpp"
#include "saccadelab/tensor.hpp"

namespace saccadelab {

/// Histogram prior over saccade sizes in dva. Edges start at 0 and are
/// strictly increasing; probabilities sum to 1. The radial density profile
/// is the bin probability divided by bin width, linearly interpolated
/// through the bin centers with zero anchors at the outermost edges, so the
/// profile vanishes outside the populated support.
struct SaccadePrior {
    std::vector<double> bin_edges_dva;
    std::vector<double> probabilities;

    void validate() const;

    /// Interpolated radial density at distance r (dva).
    double density(double r) const;

    /// CDF at x, piecewise linear through the bin edges.
    double cdf(double x) const;

    /// Inverse-CDF draw of one saccade size.
    double sample_size(RngStream& rng) const;
};

/// Default prior when no dataset is supplied: a discretized gamma
/// distribution over saccade sizes.
SaccadePrior default_gamma_prior(double shape = 2.0, double scale_dva = 2.0,
                                 int n_bins = 30, double max_dva = 20.0);

/// Empirical prior from pooled saccade sizes over all trials and subjects.
/// Throws on fewer than 2 fixations total; logs a warning below 100 saccades.
SaccadePrior fit_saccade_prior(const std::vector<Scanpath>& dataset, int n_bins = 30);

/// Isotropic saccade map: density of the prior at the distance from the
/// current fixation, normalized to [0,1]. area_correct divides the radial
/// density by 2*pi*r before normalization.
AttentionMap build_saccade_map(Vec2 current_dva, const SaccadePrior& prior,
                               const GridSpec& grid, bool area_correct = false);

} // namespace saccadelab
