#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "saccadelab/geometry.hpp"

namespace saccadelab {

struct Fixation {
    int index = 0;
    double x_dva = 0.0;
    double y_dva = 0.0;
    std::optional<double> duration_ms; // experimental data only
    std::optional<bool> on_target;

    Vec2 pos() const { return {x_dva, y_dva}; }
};

enum class StopReason { target_found, max_fixations, aborted };
enum class ScanpathSource { experimental, model, null_model, ablated };

std::string to_string(StopReason r);
std::string to_string(ScanpathSource s);
StopReason stop_reason_from_string(const std::string& s);
ScanpathSource source_from_string(const std::string& s);

struct Scanpath {
    std::vector<Fixation> fixations;
    std::string trial_id;
    std::string subject_id;
    StopReason stop_reason = StopReason::max_fixations;
    ScanpathSource source = ScanpathSource::model;

    std::size_t size() const { return fixations.size(); }

    /// Indices must be 0..n-1 consecutive.
    void validate() const;
};

enum class TaskMode { visual_search, free_viewing };
enum class AblationVariant {
    none,
    no_similarity_saliency,
    no_saccade_prior,
    defective_memory,
    infinite_ior
};

std::string to_string(TaskMode m);
std::string to_string(AblationVariant v);
TaskMode task_mode_from_string(const std::string& s);
AblationVariant ablation_from_string(const std::string& s);

/// All scalar model parameters. Defaults follow the reference values the
/// model was tuned with on natural-image search and are fixed across tasks.
struct ModelConfig {
    double alpha = 0.92;               // memory decay rate per fixation offset
    double beta = 0.5;                 // memory clipping floor
    double sigma = 0.02;               // memory Gaussian width, fraction of image width
    double w_mem = -0.93;
    double w_sac = 0.2346;
    double w_sim = 1.0;
    double w_sal = 0.0;
    double recognition_threshold = 0.3;
    double patch_dva = 1.0;
    int n_free_viewing_fixations = 8; // N_c, roughly one second of viewing
    double return_threshold_dva = 1.0;
    std::uint64_t seed = 1;
    TaskMode mode = TaskMode::visual_search;
    AblationVariant ablation = AblationVariant::none;

    /// Throws ConfigError on out-of-range values or a mode/weight mismatch
    /// (search uses w_sim with w_sal = 0; free viewing the reverse).
    void validate() const;

    /// Weight defaults implied by the task mode (w_sim=1/w_sal=0 in search,
    /// w_sim=0/w_sal=1 in free viewing).
    void apply_mode_defaults();
};

} // namespace saccadelab
