#include "saccadelab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saccadelab/errors.hpp"

namespace saccadelab {

double memory_decay_value(int current_index, int past_index, double alpha, double beta) {
    if (past_index > current_index)
        throw std::domain_error("memory decay: past fixation index exceeds the current index");
    const double decayed = std::pow(alpha, current_index - past_index);
    return std::max(decayed, beta);
}

GridSpec working_grid(const ImageGrid& image) {
    GridSpec grid;
    grid.rows = std::max(1, image.height / 8);
    grid.cols = std::max(1, image.width / 8);
    grid.width_dva = image.width_dva();
    grid.height_dva = image.height_dva();
    return grid;
}

AttentionMap build_memory_map(const std::vector<Fixation>& history, const ModelConfig& config,
                              const GridSpec& grid) {
    AttentionMap map;
    map.kind = MapKind::memory;
    map.height = grid.rows;
    map.width = grid.cols;
    map.values.assign(static_cast<std::size_t>(grid.rows) * grid.cols, 0.0);
    if (history.empty()) return map;

    const int current = history.back().index;
    const double sigma = config.sigma * grid.width_dva;
    const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    for (const Fixation& fix : history) {
        const double a = memory_decay_value(current, fix.index, config.alpha, config.beta);
        for (int r = 0; r < grid.rows; ++r) {
            for (int c = 0; c < grid.cols; ++c) {
                const Vec2 p = grid.cell_center(r, c);
                const double dx = p.x - fix.x_dva, dy = p.y - fix.y_dva;
                const double v = a * std::exp(-(dx * dx + dy * dy) * inv_two_sigma2);
                map.at(r, c) = std::max(map.at(r, c), v);
            }
        }
    }
    return map;
}

AttentionMap combine_maps(const AttentionMap& m_sim, const AttentionMap& m_sal,
                          const AttentionMap& m_mem, const AttentionMap& m_sac,
                          const ModelConfig& config) {
    const AttentionMap* maps[] = {&m_sim, &m_sal, &m_mem, &m_sac};
    for (const AttentionMap* m : maps)
        if (m->height != m_sim.height || m->width != m_sim.width)
            throw DimensionError("combine_maps: map dimensions differ");

    AttentionMap out;
    out.kind = MapKind::combined;
    out.height = m_sim.height;
    out.width = m_sim.width;
    out.values.resize(m_sim.values.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = config.w_mem * m_mem.values[i] + config.w_sac * m_sac.values[i] +
                        config.w_sim * m_sim.values[i] + config.w_sal * m_sal.values[i];
    return out;
}

Vec2 next_fixation(const AttentionMap& combined, const GridSpec& grid, SelectionRule selection,
                   RngStream& rng) {
    if (combined.height != grid.rows || combined.width != grid.cols)
        throw DimensionError("next_fixation: map does not match grid");

    std::size_t cell = 0;
    if (selection == SelectionRule::argmax) {
        cell = argmax_index(combined.values);
    } else {
        std::vector<double> mass = combined.values;
        const double lo = *std::min_element(mass.begin(), mass.end());
        if (lo < 0.0)
            for (double& v : mass) v -= lo;
        double sum = 0.0;
        for (double v : mass) sum += v;
        if (sum <= 0.0) {
            cell = rng.uniform_index(mass.size());
        } else {
            const double u = rng.uniform01() * sum;
            double cum = 0.0;
            cell = mass.size() - 1;
            for (std::size_t i = 0; i < mass.size(); ++i) {
                cum += mass[i];
                if (u < cum) {
                    cell = i;
                    break;
                }
            }
        }
    }
    const int row = static_cast<int>(cell) / grid.cols;
    const int col = static_cast<int>(cell) % grid.cols;
    return grid.cell_center(row, col);
}

namespace {

AttentionMap zero_map(const GridSpec& grid, MapKind kind) {
    AttentionMap map;
    map.kind = kind;
    map.height = grid.rows;
    map.width = grid.cols;
    map.values.assign(static_cast<std::size_t>(grid.rows) * grid.cols, 0.0);
    map.normalized = true;
    return map;
}

void mask_visited(std::vector<char>& mask, const GridSpec& grid, Vec2 fix, double threshold_dva) {
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c)
            if (distance(grid.cell_center(r, c), fix) <= threshold_dva)
                mask[static_cast<std::size_t>(r) * grid.cols + c] = 1;
}

ScanpathRun run_engine(const ImageGrid& search_image, const ImageGrid* target_image,
                       ModelConfig config, const FeatureBackend& backend,
                       const SaccadePrior& prior, const std::string& trial_id,
                       const RunOptions& options) {
    config.validate();
    prior.validate();
    if (config.mode == TaskMode::visual_search && target_image == nullptr)
        throw ConfigError("visual_search mode requires a target image");

    const AblationVariant variant = config.ablation;
    SelectionRule selection = SelectionRule::argmax;
    if (variant == AblationVariant::no_similarity_saliency) {
        config.w_sim = 0.0;
        config.w_sal = 0.0;
        selection = SelectionRule::sample;
    } else if (variant == AblationVariant::no_saccade_prior) {
        config.w_sac = 0.0;
    }

    ScanpathRun run;
    run.grid = working_grid(search_image);
    const GridSpec& grid = run.grid;
    RngStream rng = trial_stream(config.seed, trial_id);

    if (variant == AblationVariant::defective_memory) {
        // Memory weight fails to consolidate: one draw per trial in [-1,0].
        config.w_mem = -rng.uniform01();
        run.drawn_w_mem = config.w_mem;
    }

    // Static maps, resampled to the working grid and normalized once.
    run.similarity = zero_map(grid, MapKind::similarity);
    run.saliency = zero_map(grid, MapKind::saliency);
    if (config.mode == TaskMode::visual_search && config.w_sim > 0.0) {
        const FeatureTensor search_feat =
            extract_features(search_image, backend, FeatureLevel::search_level);
        const FeatureTensor target_feat =
            extract_features(*target_image, backend, FeatureLevel::target_level);
        AttentionMap sim = compute_similarity_map(search_feat, target_feat);
        run.similarity = normalize_map(resample_bilinear(sim, grid.rows, grid.cols));
    }
    if (config.mode == TaskMode::free_viewing && config.w_sal > 0.0) {
        const FeatureTensor search_feat =
            extract_features(search_image, backend, FeatureLevel::search_level);
        AttentionMap sal = compute_saliency_map(search_feat);
        run.saliency = normalize_map(resample_bilinear(sal, grid.rows, grid.cols));
    }

    Scanpath& sp = run.scanpath;
    sp.trial_id = trial_id;
    sp.subject_id = variant == AblationVariant::none ? "model" : "ablated";
    sp.source = variant == AblationVariant::none ? ScanpathSource::model : ScanpathSource::ablated;
    sp.stop_reason = StopReason::max_fixations;

    Fixation start;
    start.index = 0;
    start.x_dva = grid.width_dva / 2.0;
    start.y_dva = grid.height_dva / 2.0;
    sp.fixations.push_back(start);

    std::vector<char> ior_mask;
    if (variant == AblationVariant::infinite_ior) {
        ior_mask.assign(static_cast<std::size_t>(grid.rows) * grid.cols, 0);
        mask_visited(ior_mask, grid, start.pos(), config.return_threshold_dva);
    }

    while (true) {
        const Fixation& current = sp.fixations.back();
        if (config.mode == TaskMode::visual_search) {
            const double dist = recognition_distance(search_image, current.pos(), *target_image,
                                                     backend, config.patch_dva);
            if (dist < config.recognition_threshold) {
                sp.stop_reason = StopReason::target_found;
                break;
            }
            if (static_cast<int>(sp.fixations.size()) >= options.max_search_fixations) {
                sp.stop_reason = StopReason::max_fixations;
                break;
            }
        } else if (static_cast<int>(sp.fixations.size()) >= config.n_free_viewing_fixations) {
            sp.stop_reason = StopReason::max_fixations;
            break;
        }

        AttentionMap mem = normalize_map(build_memory_map(sp.fixations, config, grid));
        AttentionMap sac = build_saccade_map(current.pos(), prior, grid);
        AttentionMap combined = combine_maps(run.similarity, run.saliency, mem, sac, config);

        if (variant == AblationVariant::infinite_ior) {
            bool any_free = false;
            for (std::size_t i = 0; i < combined.values.size(); ++i) {
                if (ior_mask[i])
                    combined.values[i] = -std::numeric_limits<double>::infinity();
                else
                    any_free = true;
            }
            if (!any_free) {
                sp.stop_reason = StopReason::aborted;
                break;
            }
        }

        if (options.keep_maps) {
            run.memory_maps.push_back(mem);
            run.saccade_maps.push_back(sac);
            run.combined_maps.push_back(combined);
        }

        const Vec2 next = next_fixation(combined, grid, selection, rng);
        Fixation fix;
        fix.index = current.index + 1;
        fix.x_dva = next.x;
        fix.y_dva = next.y;
        sp.fixations.push_back(fix);
        if (variant == AblationVariant::infinite_ior)
            mask_visited(ior_mask, grid, next, config.return_threshold_dva);
    }
    return run;
}

} // namespace

ScanpathRun run_scanpath(const ImageGrid& search_image, const ImageGrid* target_image,
                         const ModelConfig& config, const FeatureBackend& backend,
                         const SaccadePrior& prior, const std::string& trial_id,
                         const RunOptions& options) {
    return run_engine(search_image, target_image, config, backend, prior, trial_id, options);
}

ScanpathRun run_ablation(AblationVariant variant, const ImageGrid& search_image,
                         const ImageGrid* target_image, const ModelConfig& config,
                         const FeatureBackend& backend, const SaccadePrior& prior,
                         const std::string& trial_id, const RunOptions& options) {
    if (variant == AblationVariant::none)
        throw ConfigError("run_ablation requires a non-trivial ablation variant");
    ModelConfig ablated = config;
    ablated.ablation = variant;
    return run_engine(search_image, target_image, ablated, backend, prior, trial_id, options);
}

Vec2 null_step(Vec2 current, const SaccadePrior& prior, double width_dva, double height_dva,
               RngStream& rng, int max_rejections) {
    for (int attempt = 0; attempt < max_rejections; ++attempt) {
        const double size = prior.sample_size(rng);
        const double angle = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
        const Vec2 candidate{current.x + size * std::cos(angle),
                             current.y + size * std::sin(angle)};
        if (candidate.x >= 0.0 && candidate.x <= width_dva && candidate.y >= 0.0 &&
            candidate.y <= height_dva)
            return candidate;
    }
    throw SamplingError("null model: no in-bounds saccade after " +
                        std::to_string(max_rejections) + " draws");
}

Scanpath run_null_model(const SaccadePrior& prior, int n_fixations, double width_dva,
                        double height_dva, RngStream& rng, const std::string& trial_id) {
    if (n_fixations < 1) throw ConfigError("null model needs at least one fixation");
    prior.validate();
    Scanpath sp;
    sp.trial_id = trial_id;
    sp.subject_id = "null";
    sp.source = ScanpathSource::null_model;
    sp.stop_reason = StopReason::max_fixations;
    Fixation fix;
    fix.index = 0;
    fix.x_dva = width_dva / 2.0;
    fix.y_dva = height_dva / 2.0;
    sp.fixations.push_back(fix);
    for (int i = 1; i < n_fixations; ++i) {
        const Vec2 next = null_step(sp.fixations.back().pos(), prior, width_dva, height_dva, rng);
        Fixation f;
        f.index = i;
        f.x_dva = next.x;
        f.y_dva = next.y;
        sp.fixations.push_back(f);
    }
    return sp;
}

} // namespace saccadelab
