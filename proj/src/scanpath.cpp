#include "saccadelab/scanpath.hpp"

#include "saccadelab/errors.hpp"

namespace saccadelab {

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::target_found: return "target_found";
        case StopReason::max_fixations: return "max_fixations";
        case StopReason::aborted: return "aborted";
    }
    return "aborted";
}

std::string to_string(ScanpathSource s) {
    switch (s) {
        case ScanpathSource::experimental: return "experimental";
        case ScanpathSource::model: return "model";
        case ScanpathSource::null_model: return "null";
        case ScanpathSource::ablated: return "ablated";
    }
    return "model";
}

StopReason stop_reason_from_string(const std::string& s) {
    if (s == "target_found") return StopReason::target_found;
    if (s == "max_fixations") return StopReason::max_fixations;
    if (s == "aborted") return StopReason::aborted;
    throw ParseError("unknown stop_reason '" + s + "'");
}

ScanpathSource source_from_string(const std::string& s) {
    if (s == "experimental") return ScanpathSource::experimental;
    if (s == "model") return ScanpathSource::model;
    if (s == "null") return ScanpathSource::null_model;
    if (s == "ablated") return ScanpathSource::ablated;
    throw ParseError("unknown source '" + s + "'");
}

void Scanpath::validate() const {
    for (std::size_t i = 0; i < fixations.size(); ++i)
        if (fixations[i].index != static_cast<int>(i))
            throw ConfigError("scanpath " + trial_id + " has non-contiguous fixation indices");
}

std::string to_string(TaskMode m) {
    return m == TaskMode::visual_search ? "visual_search" : "free_viewing";
}

std::string to_string(AblationVariant v) {
    switch (v) {
        case AblationVariant::none: return "none";
        case AblationVariant::no_similarity_saliency: return "no_similarity_saliency";
        case AblationVariant::no_saccade_prior: return "no_saccade_prior";
        case AblationVariant::defective_memory: return "defective_memory";
        case AblationVariant::infinite_ior: return "infinite_ior";
    }
    return "none";
}

TaskMode task_mode_from_string(const std::string& s) {
    if (s == "visual_search") return TaskMode::visual_search;
    if (s == "free_viewing") return TaskMode::free_viewing;
    throw ParseError("unknown mode '" + s + "'");
}

AblationVariant ablation_from_string(const std::string& s) {
    if (s == "none") return AblationVariant::none;
    if (s == "no_similarity_saliency") return AblationVariant::no_similarity_saliency;
    if (s == "no_saccade_prior") return AblationVariant::no_saccade_prior;
    if (s == "defective_memory") return AblationVariant::defective_memory;
    if (s == "infinite_ior") return AblationVariant::infinite_ior;
    throw ConfigError("unknown ablation variant '" + s + "'");
}

void ModelConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
    if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must lie in (0,1)");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (w_mem > 0.0) throw ConfigError("w_mem must be <= 0");
    if (w_sac < 0.0 || w_sim < 0.0 || w_sal < 0.0)
        throw ConfigError("map weights must be non-negative");
    if (recognition_threshold < 0.0 || recognition_threshold > 2.0)
        throw ConfigError("recognition_threshold must lie in [0,2]");
    if (!(patch_dva > 0.0)) throw ConfigError("patch_dva must be positive");
    if (n_free_viewing_fixations < 1) throw ConfigError("N_c must be positive");
    if (!(return_threshold_dva > 0.0)) throw ConfigError("return_threshold_dva must be positive");
    if (mode == TaskMode::visual_search && w_sal != 0.0)
        throw ConfigError("visual_search mode requires w_sal = 0");
    if (mode == TaskMode::free_viewing && w_sim != 0.0)
        throw ConfigError("free_viewing mode requires w_sim = 0");
}

void ModelConfig::apply_mode_defaults() {
    if (mode == TaskMode::visual_search) {
        w_sim = 1.0;
        w_sal = 0.0;
    } else {
        w_sim = 0.0;
        w_sal = 1.0;
    }
}

} // namespace saccadelab
