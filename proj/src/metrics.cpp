#include "saccadelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "saccadelab/errors.hpp"
#include "saccadelab/gbvs.hpp"

namespace saccadelab {

std::string to_string(FixationClass c) {
    switch (c) {
        case FixationClass::return_fixation: return "return";
        case FixationClass::to_be_revisited: return "to_be_revisited";
        case FixationClass::non_return: return "non_return";
    }
    return "non_return";
}

int ReturnAnnotation::count(FixationClass c) const {
    int n = 0;
    for (FixationClass cls : classes)
        if (cls == c) ++n;
    return n;
}

ReturnAnnotation detect_return_fixations(const Scanpath& scanpath, double threshold_dva) {
    if (!(threshold_dva > 0.0)) throw std::domain_error("return threshold must be positive");
    const std::size_t n = scanpath.size();
    ReturnAnnotation ann;
    ann.classes.assign(n, FixationClass::non_return);
    ann.matched_index.assign(n, std::nullopt);
    ann.revisit_count.assign(n, 0);

    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            if (distance(scanpath.fixations[i].pos(), scanpath.fixations[j].pos()) <=
                threshold_dva) {
                ann.classes[j] = FixationClass::return_fixation;
                ann.matched_index[j] = static_cast<int>(i);
                ++ann.revisit_count[i];
                if (i + 1 == j) ++ann.offset_zero_anomalies;
                break; // earliest prior fixation wins
            }
        }
    }
    // Matched priors become to-be-revisited unless they are returns
    // themselves (dual-role fixations stay returns, tracked by
    // revisit_count, so the partition remains exclusive).
    for (std::size_t j = 0; j < n; ++j) {
        if (ann.classes[j] != FixationClass::return_fixation || !ann.matched_index[j]) continue;
        const std::size_t i = static_cast<std::size_t>(*ann.matched_index[j]);
        if (ann.classes[i] != FixationClass::return_fixation)
            ann.classes[i] = FixationClass::to_be_revisited;
    }
    return ann;
}

void Histogram::validate() const {
    if (bin_edges.size() < 2 || values.size() + 1 != bin_edges.size())
        throw DimensionError("histogram bin/value count mismatch");
    for (std::size_t i = 1; i < bin_edges.size(); ++i)
        if (!(bin_edges[i] > bin_edges[i - 1]))
            throw std::domain_error("histogram edges must be strictly increasing");
    if (normalized) {
        double sum = 0.0;
        for (double v : values) sum += v;
        if (std::fabs(sum - 1.0) > 1e-9)
            throw std::domain_error("normalized histogram must sum to 1");
    }
}

Histogram Histogram::normalize() const {
    Histogram out = *this;
    double sum = 0.0;
    for (double v : out.values) sum += v;
    if (sum > 0.0)
        for (double& v : out.values) v /= sum;
    out.normalized = true;
    return out;
}

Histogram make_histogram(const std::vector<double>& samples, double bin_width, double min_edge,
                         double max_edge) {
    Histogram h;
    const int n_bins = std::max(1, static_cast<int>(std::ceil((max_edge - min_edge) / bin_width)));
    h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
    for (int i = 0; i <= n_bins; ++i)
        h.bin_edges[static_cast<std::size_t>(i)] = min_edge + i * bin_width;
    h.values.assign(static_cast<std::size_t>(n_bins), 0.0);
    for (double s : samples) {
        int bin = static_cast<int>(std::floor((s - min_edge) / bin_width));
        bin = std::clamp(bin, 0, n_bins - 1);
        h.values[static_cast<std::size_t>(bin)] += 1.0;
    }
    return h;
}

std::optional<StatSummary> summarize(const std::vector<double>& samples) {
    if (samples.empty()) return std::nullopt;
    StatSummary s;
    s.n = samples.size();
    double sum = 0.0;
    for (double v : samples) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : samples) ss += (v - s.mean) * (v - s.mean);
        s.sem = std::sqrt(ss / static_cast<double>(s.n - 1)) /
                std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

ProportionResult proportion_return(const std::vector<Scanpath>& trials, double threshold_dva,
                                   const ProportionOptions& options) {
    if (trials.empty()) throw ConfigError("proportion_return needs at least one trial");
    ProportionResult result;
    std::map<std::string, std::vector<double>> by_subject;
    for (const Scanpath& trial : trials) {
        Scanpath view = trial;
        if (options.first_k && static_cast<int>(view.fixations.size()) > *options.first_k)
            view.fixations.resize(static_cast<std::size_t>(*options.first_k));
        double ratio = 0.0;
        if (view.fixations.size() >= 2) {
            const ReturnAnnotation ann = detect_return_fixations(view, threshold_dva);
            int count = 0;
            if (options.twice_only) {
                for (int rc : ann.revisit_count)
                    if (rc >= 2) ++count;
            } else {
                count = ann.count(FixationClass::return_fixation);
            }
            ratio = static_cast<double>(count) / static_cast<double>(view.fixations.size());
        }
        result.per_trial.push_back(ratio);
        by_subject[trial.subject_id].push_back(ratio);
    }
    double total = 0.0;
    for (const auto& [subject, ratios] : by_subject) {
        const double mean = summarize(ratios)->mean;
        result.per_subject_mean[subject] = mean;
        total += mean;
    }
    result.subject_mean = total / static_cast<double>(by_subject.size());
    return result;
}

std::vector<int> return_offsets(const ReturnAnnotation& annotation) {
    std::vector<int> offsets;
    for (std::size_t j = 0; j < annotation.size(); ++j)
        if (annotation.classes[j] == FixationClass::return_fixation && annotation.matched_index[j])
            offsets.push_back(static_cast<int>(j) - *annotation.matched_index[j] - 1);
    return offsets;
}

Histogram offset_histogram(const std::vector<int>& offsets) {
    int max_offset = 1;
    for (int o : offsets) max_offset = std::max(max_offset, o);
    std::vector<double> samples(offsets.begin(), offsets.end());
    return make_histogram(samples, 1.0, 0.0, max_offset + 1.0);
}

std::vector<std::pair<double, bool>> turning_angle_samples(const Scanpath& scanpath,
                                                           const ReturnAnnotation& annotation) {
    std::vector<std::pair<double, bool>> samples;
    for (std::size_t t = 2; t < scanpath.size(); ++t) {
        const Vec2 v1 = scanpath.fixations[t - 1].pos() - scanpath.fixations[t - 2].pos();
        const Vec2 v2 = scanpath.fixations[t].pos() - scanpath.fixations[t - 1].pos();
        const double n1 = norm(v1), n2 = norm(v2);
        if (n1 == 0.0 || n2 == 0.0) continue;
        const double cosv = std::clamp(dot(v1, v2) / (n1 * n2), -1.0, 1.0);
        const double angle = std::acos(cosv) * 180.0 / 3.14159265358979323846;
        samples.emplace_back(angle,
                             annotation.classes[t] == FixationClass::return_fixation);
    }
    return samples;
}

std::pair<Histogram, Histogram> turning_angles(const Scanpath& scanpath,
                                               const ReturnAnnotation& annotation,
                                               double bin_deg) {
    std::vector<double> ret, non;
    for (const auto& [angle, is_return] : turning_angle_samples(scanpath, annotation))
        (is_return ? ret : non).push_back(angle);
    return {make_histogram(ret, bin_deg, 0.0, 180.0), make_histogram(non, bin_deg, 0.0, 180.0)};
}

namespace {

void accumulate_sizes(const Scanpath& scanpath, const ReturnAnnotation& annotation,
                      std::vector<double>& ret, std::vector<double>& tbr,
                      std::vector<double>& non, std::vector<double>& pooled) {
    for (std::size_t t = 1; t < scanpath.size(); ++t) {
        const double size =
            distance(scanpath.fixations[t].pos(), scanpath.fixations[t - 1].pos());
        pooled.push_back(size);
        switch (annotation.classes[t]) {
            case FixationClass::return_fixation: ret.push_back(size); break;
            case FixationClass::to_be_revisited: tbr.push_back(size); break;
            case FixationClass::non_return: non.push_back(size); break;
        }
    }
}

} // namespace

SaccadeSizeStats saccade_size_stats(const Scanpath& scanpath,
                                    const ReturnAnnotation& annotation) {
    return saccade_size_stats(std::vector<Scanpath>{scanpath},
                              std::vector<ReturnAnnotation>{annotation});
}

SaccadeSizeStats saccade_size_stats(const std::vector<Scanpath>& scanpaths,
                                    const std::vector<ReturnAnnotation>& annotations) {
    if (scanpaths.size() != annotations.size())
        throw DimensionError("saccade_size_stats: scanpath/annotation count mismatch");
    std::vector<double> ret, tbr, non;
    SaccadeSizeStats stats;
    for (std::size_t i = 0; i < scanpaths.size(); ++i)
        accumulate_sizes(scanpaths[i], annotations[i], ret, tbr, non, stats.pooled_sizes);
    stats.returns = summarize(ret);
    stats.to_be_revisited = summarize(tbr);
    stats.non_return = summarize(non);
    return stats;
}

DurationStats fixation_duration_stats(const std::vector<Scanpath>& scanpaths,
                                      const std::vector<ReturnAnnotation>& annotations,
                                      bool split_by_target) {
    if (scanpaths.size() != annotations.size())
        throw DimensionError("duration stats: scanpath/annotation count mismatch");
    std::vector<double> by_class[3];
    std::vector<double> split[3][2];
    for (std::size_t s = 0; s < scanpaths.size(); ++s) {
        for (std::size_t t = 0; t < scanpaths[s].size(); ++t) {
            const Fixation& f = scanpaths[s].fixations[t];
            if (!f.duration_ms)
                throw UnsupportedDataError("fixation durations are missing from this dataset");
            const int cls = static_cast<int>(annotations[s].classes[t]);
            by_class[cls].push_back(*f.duration_ms);
            if (split_by_target && f.on_target)
                split[cls][*f.on_target ? 1 : 0].push_back(*f.duration_ms);
        }
    }
    DurationStats stats;
    stats.returns = summarize(by_class[static_cast<int>(FixationClass::return_fixation)]);
    stats.to_be_revisited = summarize(by_class[static_cast<int>(FixationClass::to_be_revisited)]);
    stats.non_return = summarize(by_class[static_cast<int>(FixationClass::non_return)]);
    if (split_by_target) {
        stats.has_target_split = true;
        for (int c = 0; c < 3; ++c)
            for (int t = 0; t < 2; ++t) stats.split[c][t] = summarize(split[c][t]);
    }
    return stats;
}

namespace {

// Separable Gaussian blur with border renormalization, so constant inputs
// stay constant.
std::vector<double> gaussian_blur_grid(const std::vector<double>& grid, int rows, int cols,
                                       double sigma) {
    if (sigma <= 0.0) return grid;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius) + 1);
    for (int k = -radius; k <= radius; ++k)
        kernel[static_cast<std::size_t>(k + radius)] =
            std::exp(-(static_cast<double>(k) * k) / (2.0 * sigma * sigma));

    std::vector<double> tmp(grid.size(), 0.0), out(grid.size(), 0.0);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0, wsum = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int cc = c + k;
                if (cc < 0 || cc >= cols) continue;
                const double w = kernel[static_cast<std::size_t>(k + radius)];
                acc += w * grid[static_cast<std::size_t>(r) * cols + cc];
                wsum += w;
            }
            tmp[static_cast<std::size_t>(r) * cols + c] = acc / wsum;
        }
    }
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            double acc = 0.0, wsum = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                const int rr = r + k;
                if (rr < 0 || rr >= rows) continue;
                const double w = kernel[static_cast<std::size_t>(k + radius)];
                acc += w * tmp[static_cast<std::size_t>(rr) * cols + c];
                wsum += w;
            }
            out[static_cast<std::size_t>(r) * cols + c] = acc / wsum;
        }
    }
    return out;
}

double entropy_nats(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

std::vector<double> floor_and_renormalize(std::vector<double> p, double floor) {
    for (double& v : p)
        if (v <= 0.0) v = floor;
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    return p;
}

int cell_of(double coord, double extent, int cells) {
    int c = static_cast<int>(std::floor(coord / extent * cells));
    return std::clamp(c, 0, cells - 1);
}

double entropy_from_subject_cells(const std::vector<std::set<int>>& cells_by_subject,
                                  int n_subjects, double, double,
                                  const EntropyOptions& options) {
    const int n_cells = options.grid_rows * options.grid_cols;
    std::vector<double> prop(static_cast<std::size_t>(n_cells), 0.0);
    for (const std::set<int>& cells : cells_by_subject)
        for (int cell : cells) prop[static_cast<std::size_t>(cell)] += 1.0;
    for (double& v : prop) v /= static_cast<double>(n_subjects);
    prop = gaussian_blur_grid(prop, options.grid_rows, options.grid_cols,
                              options.blur_sigma_cells);
    prop = floor_and_renormalize(std::move(prop), options.floor);
    return entropy_nats(prop);
}

} // namespace

std::optional<double> consistency_entropy(const std::vector<std::vector<Vec2>>& returns_by_subject,
                                          double width_dva, double height_dva,
                                          const EntropyOptions& options) {
    std::size_t total = 0;
    std::vector<std::set<int>> cells(returns_by_subject.size());
    for (std::size_t s = 0; s < returns_by_subject.size(); ++s) {
        for (const Vec2& p : returns_by_subject[s]) {
            ++total;
            const int r = cell_of(p.y, height_dva, options.grid_rows);
            const int c = cell_of(p.x, width_dva, options.grid_cols);
            cells[s].insert(r * options.grid_cols + c);
        }
    }
    if (total == 0) return std::nullopt;
    return entropy_from_subject_cells(cells, static_cast<int>(returns_by_subject.size()),
                                      width_dva, height_dva, options);
}

double chance_consistency_entropy(const std::vector<std::size_t>& returns_per_subject,
                                  double width_dva, double height_dva, RngStream& rng,
                                  int repetitions, const EntropyOptions& options) {
    const int n_cells = options.grid_rows * options.grid_cols;
    double acc = 0.0;
    for (int rep = 0; rep < repetitions; ++rep) {
        std::vector<std::set<int>> cells(returns_per_subject.size());
        for (std::size_t s = 0; s < returns_per_subject.size(); ++s)
            for (std::size_t k = 0; k < returns_per_subject[s]; ++k)
                cells[s].insert(static_cast<int>(rng.uniform_index(
                    static_cast<std::uint64_t>(n_cells))));
        acc += entropy_from_subject_cells(cells, static_cast<int>(returns_per_subject.size()),
                                          width_dva, height_dva, options);
    }
    return acc / repetitions;
}

double kld_of_distributions(std::vector<double> p, std::vector<double> q, double floor) {
    if (p.size() != q.size()) throw DimensionError("KLD: distribution sizes differ");
    p = floor_and_renormalize(std::move(p), floor);
    q = floor_and_renormalize(std::move(q), floor);
    double kld = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) kld += p[i] * std::log(p[i] / q[i]);
    return kld;
}

std::optional<double> spatial_kld(const std::vector<Vec2>& returns,
                                  const std::vector<Vec2>& non_returns, double width_dva,
                                  double height_dva, double grid_resolution_dva) {
    if (returns.empty() || non_returns.empty()) return std::nullopt;
    const int cols = std::max(1, static_cast<int>(std::ceil(width_dva / grid_resolution_dva)));
    const int rows = std::max(1, static_cast<int>(std::ceil(height_dva / grid_resolution_dva)));
    auto quantize = [&](const std::vector<Vec2>& pts) {
        std::vector<double> grid(static_cast<std::size_t>(rows) * cols, 0.0);
        for (const Vec2& p : pts) {
            const int r = cell_of(p.y, height_dva, rows);
            const int c = cell_of(p.x, width_dva, cols);
            grid[static_cast<std::size_t>(r) * cols + c] += 1.0;
        }
        for (double& v : grid) v /= static_cast<double>(pts.size());
        return grid;
    };
    return kld_of_distributions(quantize(returns), quantize(non_returns));
}

double similarity_index(double s, double m) {
    if (s < 0.0 || m < 0.0) throw std::domain_error("similarity index needs non-negative inputs");
    if (s + m <= 0.0) throw std::domain_error("similarity index is undefined for s = m = 0");
    return 1.0 - (s - m) / (s + m);
}

SaliencyByClass saliency_at_fixations(const ImageGrid& image,
                                      const std::vector<Scanpath>& scanpaths,
                                      const std::vector<ReturnAnnotation>& annotations,
                                      double patch_dva) {
    if (scanpaths.size() != annotations.size())
        throw DimensionError("saliency_at_fixations: scanpath/annotation count mismatch");
    const GbvsResult saliency = gbvs_saliency(image);
    const AttentionMap& map = saliency.map;
    const double cell_w = image.width_dva() / map.width;
    const double cell_h = image.height_dva() / map.height;

    std::vector<double> by_class[3];
    for (std::size_t s = 0; s < scanpaths.size(); ++s) {
        for (std::size_t t = 0; t < scanpaths[s].size(); ++t) {
            const Fixation& f = scanpaths[s].fixations[t];
            const double half = patch_dva / 2.0;
            const int c0 = std::clamp(static_cast<int>(std::floor((f.x_dva - half) / cell_w)), 0,
                                      map.width - 1);
            const int c1 = std::clamp(static_cast<int>(std::floor((f.x_dva + half) / cell_w)), 0,
                                      map.width - 1);
            const int r0 = std::clamp(static_cast<int>(std::floor((f.y_dva - half) / cell_h)), 0,
                                      map.height - 1);
            const int r1 = std::clamp(static_cast<int>(std::floor((f.y_dva + half) / cell_h)), 0,
                                      map.height - 1);
            double acc = 0.0;
            int count = 0;
            for (int r = r0; r <= r1; ++r)
                for (int c = c0; c <= c1; ++c) {
                    acc += map.at(r, c);
                    ++count;
                }
            by_class[static_cast<int>(annotations[s].classes[t])].push_back(acc / count);
        }
    }
    SaliencyByClass result;
    result.returns = summarize(by_class[static_cast<int>(FixationClass::return_fixation)]);
    result.to_be_revisited =
        summarize(by_class[static_cast<int>(FixationClass::to_be_revisited)]);
    result.non_return = summarize(by_class[static_cast<int>(FixationClass::non_return)]);
    return result;
}

RecognitionErrorRates recognition_error_rates(
    const std::vector<Scanpath>& scanpaths, const std::map<std::string, RectDva>& target_boxes) {
    RecognitionErrorRates rates;
    if (scanpaths.empty()) return rates; // absent, not zero
    std::size_t total_fixations = 0, fn_events = 0, fp_trials = 0;
    for (const Scanpath& sp : scanpaths) {
        auto it = target_boxes.find(sp.trial_id);
        if (it == target_boxes.end())
            throw UnsupportedDataError("no target box for trial '" + sp.trial_id + "'");
        const RectDva& box = it->second;
        total_fixations += sp.size();
        for (std::size_t t = 0; t < sp.size(); ++t) {
            const bool inside = box.contains(sp.fixations[t].pos());
            const bool found_here = sp.stop_reason == StopReason::target_found &&
                                    t + 1 == sp.size();
            if (inside && !found_here) ++fn_events;
        }
        if (sp.stop_reason == StopReason::target_found && !sp.fixations.empty() &&
            !box.contains(sp.fixations.back().pos()))
            ++fp_trials;
    }
    if (total_fixations > 0)
        rates.false_negative_rate =
            static_cast<double>(fn_events) / static_cast<double>(total_fixations);
    rates.false_positive_rate =
        static_cast<double>(fp_trials) / static_cast<double>(scanpaths.size());
    return rates;
}

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw DimensionError("pearson: sample sizes differ");
    const std::size_t n = xs.size();
    if (n < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

std::optional<double> angle_size_correlation(const std::vector<Scanpath>& scanpaths) {
    std::vector<double> angles, sizes;
    for (const Scanpath& sp : scanpaths) {
        for (std::size_t t = 2; t < sp.size(); ++t) {
            const Vec2 v1 = sp.fixations[t - 1].pos() - sp.fixations[t - 2].pos();
            const Vec2 v2 = sp.fixations[t].pos() - sp.fixations[t - 1].pos();
            const double n1 = norm(v1), n2 = norm(v2);
            if (n1 == 0.0 || n2 == 0.0) continue;
            const double cosv = std::clamp(dot(v1, v2) / (n1 * n2), -1.0, 1.0);
            angles.push_back(std::acos(cosv) * 180.0 / 3.14159265358979323846);
            sizes.push_back(n2);
        }
    }
    return pearson(angles, sizes);
}

} // namespace saccadelab
