#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "saccadelab/geometry.hpp"
#include "saccadelab/image.hpp"
#include "saccadelab/rng.hpp"
#include "saccadelab/scanpath.hpp"

namespace saccadelab {

enum class FixationClass { return_fixation, to_be_revisited, non_return };

std::string to_string(FixationClass c);

/// Three-way partition of a scanpath's fixations. A return matches the
/// earliest prior fixation within the threshold; a fixation that is both a
/// return and later revisited stays classed as a return, with the revisit
/// bookkeeping kept in revisit_count so the partition remains exclusive.
struct ReturnAnnotation {
    std::vector<FixationClass> classes;
    std::vector<std::optional<int>> matched_index; // for returns only
    std::vector<int> revisit_count;                // returns matched to this fixation
    int offset_zero_anomalies = 0; // consecutive fixations within threshold

    std::size_t size() const { return classes.size(); }
    int count(FixationClass c) const;
};

ReturnAnnotation detect_return_fixations(const Scanpath& scanpath, double threshold_dva);

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<double> values; // counts, or probabilities when normalized
    bool normalized = false;

    void validate() const;
    Histogram normalize() const;
};

Histogram make_histogram(const std::vector<double>& samples, double bin_width,
                         double min_edge, double max_edge);

struct StatSummary {
    double mean = 0.0;
    double sem = 0.0;
    std::size_t n = 0;
};

std::optional<StatSummary> summarize(const std::vector<double>& samples);

struct ProportionOptions {
    std::optional<int> first_k;  // restrict to the first k fixations
    bool twice_only = false;     // count fixations revisited at least twice
};

struct ProportionResult {
    std::vector<double> per_trial;
    std::map<std::string, double> per_subject_mean;
    double subject_mean = 0.0; // mean of per-subject means
};

/// Per-trial return proportions and the across-subject mean. Trials with
/// fewer than 2 fixations score 0.
ProportionResult proportion_return(const std::vector<Scanpath>& trials, double threshold_dva,
                                   const ProportionOptions& options = {});

/// Return offsets (intervening fixation counts) for one annotation.
/// A-B-A has offset 1; offset-0 entries only arise from consecutive-fixation
/// anomalies and are counted separately in the annotation.
std::vector<int> return_offsets(const ReturnAnnotation& annotation);

/// Histogram over pooled integer offsets with unit bins [0,1),[1,2),...
Histogram offset_histogram(const std::vector<int>& offsets);

/// Turning angle at each interior fixation: the angle between the incoming
/// and outgoing saccade vectors, 0 for straight motion and 180 for an exact
/// reversal. Triples with a zero-length saccade are skipped.
std::vector<std::pair<double, bool>> turning_angle_samples(const Scanpath& scanpath,
                                                           const ReturnAnnotation& annotation);

/// Angle histograms (returns, non-returns) with bin_deg-wide bins over
/// [0,180]. to_be_revisited fixations count as non-returns here, matching
/// the two-way split used for this analysis.
std::pair<Histogram, Histogram> turning_angles(const Scanpath& scanpath,
                                               const ReturnAnnotation& annotation,
                                               double bin_deg = 12.0);

struct SaccadeSizeStats {
    std::optional<StatSummary> returns;
    std::optional<StatSummary> to_be_revisited;
    std::optional<StatSummary> non_return;
    std::vector<double> pooled_sizes;
};

/// Saccade size attributed to fixation t is the dva length of the step
/// (t-1 -> t), grouped by the class of fixation t.
SaccadeSizeStats saccade_size_stats(const Scanpath& scanpath,
                                    const ReturnAnnotation& annotation);

SaccadeSizeStats saccade_size_stats(const std::vector<Scanpath>& scanpaths,
                                    const std::vector<ReturnAnnotation>& annotations);

struct DurationStats {
    std::optional<StatSummary> returns;
    std::optional<StatSummary> to_be_revisited;
    std::optional<StatSummary> non_return;
    // filled when split_by_target is requested: [class][on_target]
    std::optional<StatSummary> split[3][2];
    bool has_target_split = false;
};

/// Duration statistics per class; requires durations on every fixation.
DurationStats fixation_duration_stats(const std::vector<Scanpath>& scanpaths,
                                      const std::vector<ReturnAnnotation>& annotations,
                                      bool split_by_target = false);

struct EntropyOptions {
    int grid_rows = 32;
    int grid_cols = 40;
    double blur_sigma_cells = 1.0;
    double floor = 1e-10;
};

/// Between-subject consistency of return locations for one image: per-cell
/// proportion of subjects with a return there, Gaussian-blurred, floored,
/// renormalized; natural-log entropy. Absent when there are no returns.
std::optional<double> consistency_entropy(const std::vector<std::vector<Vec2>>& returns_by_subject,
                                          double width_dva, double height_dva,
                                          const EntropyOptions& options = {});

/// Chance entropy: the same per-subject return counts placed uniformly at
/// random, averaged over repetitions.
double chance_consistency_entropy(const std::vector<std::size_t>& returns_per_subject,
                                  double width_dva, double height_dva, RngStream& rng,
                                  int repetitions = 100, const EntropyOptions& options = {});

/// KLD(p || q) after flooring zeros and renormalizing both distributions.
double kld_of_distributions(std::vector<double> p, std::vector<double> q, double floor = 1e-10);

/// Spatial KLD between return and non-return locations quantized on a grid
/// of the given resolution. Absent when either set is empty.
std::optional<double> spatial_kld(const std::vector<Vec2>& returns,
                                  const std::vector<Vec2>& non_returns, double width_dva,
                                  double height_dva, double grid_resolution_dva = 1.0);

/// Similarity index between a subject statistic s and a model statistic m:
/// 1 - (s - m)/(s + m), in [0,2]. Requires s + m > 0.
double similarity_index(double s, double m);

struct SaliencyByClass {
    std::optional<StatSummary> returns;
    std::optional<StatSummary> to_be_revisited;
    std::optional<StatSummary> non_return;
};

/// Mean bottom-up (graph-based) saliency in a patch_dva square around each
/// fixation, grouped by class. The saliency map is computed once per image.
SaliencyByClass saliency_at_fixations(const ImageGrid& image,
                                      const std::vector<Scanpath>& scanpaths,
                                      const std::vector<ReturnAnnotation>& annotations,
                                      double patch_dva = 1.0);

struct RecognitionErrorRates {
    std::optional<double> false_negative_rate;
    std::optional<double> false_positive_rate;
};

/// FN: fixations inside the target box where the run did not stop, over all
/// fixations. FP: trials that stopped target_found outside the box, over all
/// trials. Boxes are keyed by trial_id; a missing box raises.
RecognitionErrorRates recognition_error_rates(const std::vector<Scanpath>& scanpaths,
                                              const std::map<std::string, RectDva>& target_boxes);

/// Pearson correlation between each turning angle and the size of the
/// saccade that follows it (the second saccade of the triple). Absent on
/// zero variance or fewer than 2 pairs.
std::optional<double> angle_size_correlation(const std::vector<Scanpath>& scanpaths);

std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace saccadelab
