#include "saccadelab/prior.hpp"

#include <algorithm>
#include <cmath>

#include "saccadelab/errors.hpp"
#include "saccadelab/log.hpp"

namespace saccadelab {

void SaccadePrior::validate() const {
    if (bin_edges_dva.size() < 2)
        throw ConfigError("saccade prior needs at least one bin");
    if (probabilities.size() + 1 != bin_edges_dva.size())
        throw ConfigError("saccade prior bin/probability count mismatch");
    if (bin_edges_dva.front() != 0.0)
        throw ConfigError("saccade prior bin edges must start at 0");
    for (std::size_t i = 1; i < bin_edges_dva.size(); ++i)
        if (!(bin_edges_dva[i] > bin_edges_dva[i - 1]))
            throw ConfigError("saccade prior bin edges must be strictly increasing");
    double sum = 0.0;
    for (double p : probabilities) {
        if (p < 0.0) throw ConfigError("saccade prior probabilities must be non-negative");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw ConfigError("saccade prior probabilities must sum to 1");
}

double SaccadePrior::density(double r) const {
    // Piecewise-linear profile through the bin centers (probability / width),
    // anchored at zero on the outermost edges so the density vanishes
    // outside the prior's support.
    const std::size_t k = probabilities.size();
    if (r < bin_edges_dva.front() || r > bin_edges_dva.back()) return 0.0;

    auto knot_x = [&](std::size_t i) -> double {
        if (i == 0) return bin_edges_dva.front();
        if (i == k + 1) return bin_edges_dva.back();
        return 0.5 * (bin_edges_dva[i - 1] + bin_edges_dva[i]);
    };
    auto knot_v = [&](std::size_t i) -> double {
        if (i == 0 || i == k + 1) return 0.0;
        return probabilities[i - 1] / (bin_edges_dva[i] - bin_edges_dva[i - 1]);
    };

    for (std::size_t i = 0; i + 1 <= k + 1; ++i) {
        const double x0 = knot_x(i), x1 = knot_x(i + 1);
        if (r <= x1) {
            if (x1 == x0) return knot_v(i + 1);
            const double t = (r - x0) / (x1 - x0);
            return knot_v(i) + t * (knot_v(i + 1) - knot_v(i));
        }
    }
    return 0.0;
}

double SaccadePrior::cdf(double x) const {
    if (x <= bin_edges_dva.front()) return 0.0;
    double cum = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        const double lo = bin_edges_dva[i], hi = bin_edges_dva[i + 1];
        if (x >= hi) {
            cum += probabilities[i];
        } else {
            cum += probabilities[i] * (x - lo) / (hi - lo);
            return cum;
        }
    }
    return 1.0;
}

double SaccadePrior::sample_size(RngStream& rng) const {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (u < cum + probabilities[i] || i + 1 == probabilities.size()) {
            if (probabilities[i] <= 0.0) continue;
            const double lo = bin_edges_dva[i], hi = bin_edges_dva[i + 1];
            return std::clamp(lo + (u - cum) / probabilities[i] * (hi - lo), lo, hi);
        }
        cum += probabilities[i];
    }
    return bin_edges_dva.back();
}

SaccadePrior default_gamma_prior(double shape, double scale_dva, int n_bins, double max_dva) {
    SaccadePrior prior;
    prior.bin_edges_dva.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i)
        prior.bin_edges_dva[static_cast<std::size_t>(i)] = max_dva * i / n_bins;
    prior.probabilities.resize(static_cast<std::size_t>(n_bins));

    // Unnormalized gamma pdf integrated per bin (Simpson), then normalized
    // over the truncated support.
    auto pdf = [&](double x) {
        return x <= 0.0 ? 0.0 : std::pow(x, shape - 1.0) * std::exp(-x / scale_dva);
    };
    const int steps = 64;
    double total = 0.0;
    for (int i = 0; i < n_bins; ++i) {
        const double lo = prior.bin_edges_dva[static_cast<std::size_t>(i)];
        const double hi = prior.bin_edges_dva[static_cast<std::size_t>(i) + 1];
        const double h = (hi - lo) / steps;
        double acc = pdf(lo) + pdf(hi);
        for (int s = 1; s < steps; ++s) acc += (s % 2 ? 4.0 : 2.0) * pdf(lo + s * h);
        const double mass = acc * h / 3.0;
        prior.probabilities[static_cast<std::size_t>(i)] = mass;
        total += mass;
    }
    for (double& p : prior.probabilities) p /= total;
    prior.validate();
    return prior;
}

SaccadePrior fit_saccade_prior(const std::vector<Scanpath>& dataset, int n_bins) {
    std::vector<double> sizes;
    std::size_t total_fixations = 0;
    for (const Scanpath& sp : dataset) {
        total_fixations += sp.fixations.size();
        for (std::size_t i = 1; i < sp.fixations.size(); ++i)
            sizes.push_back(distance(sp.fixations[i].pos(), sp.fixations[i - 1].pos()));
    }
    if (total_fixations < 2)
        throw ConfigError("saccade prior fit needs at least 2 fixations");
    if (sizes.size() < 100)
        log_warn("fitting saccade prior from only " + std::to_string(sizes.size()) +
                 " saccades; at least 100 recommended");

    const double max_size = *std::max_element(sizes.begin(), sizes.end());
    const double max_edge = max_size > 0.0 ? max_size * (1.0 + 1e-9) : 1.0;
    SaccadePrior prior;
    prior.bin_edges_dva.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i)
        prior.bin_edges_dva[static_cast<std::size_t>(i)] = max_edge * i / n_bins;
    prior.probabilities.assign(static_cast<std::size_t>(n_bins), 0.0);
    for (double s : sizes) {
        int bin = static_cast<int>(s / max_edge * n_bins);
        bin = std::clamp(bin, 0, n_bins - 1);
        prior.probabilities[static_cast<std::size_t>(bin)] += 1.0;
    }
    for (double& p : prior.probabilities) p /= static_cast<double>(sizes.size());
    prior.validate();
    return prior;
}

AttentionMap build_saccade_map(Vec2 current_dva, const SaccadePrior& prior, const GridSpec& grid,
                               bool area_correct) {
    AttentionMap map;
    map.kind = MapKind::saccade;
    map.height = grid.rows;
    map.width = grid.cols;
    map.values.resize(static_cast<std::size_t>(grid.rows) * grid.cols);
    const double r_floor = 0.5 * std::min(grid.cell_width(), grid.cell_height());
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const double dist = distance(grid.cell_center(r, c), current_dva);
            double v = prior.density(dist);
            if (area_correct) v /= 2.0 * 3.14159265358979323846 * std::max(dist, r_floor);
            map.at(r, c) = v;
        }
    }
    return normalize_map(map);
}

} // namespace saccadelab
