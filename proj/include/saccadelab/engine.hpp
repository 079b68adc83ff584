#pragma once

#include <optional>
#include <vector>

#include "saccadelab/features.hpp"
#include "saccadelab/prior.hpp"
#include "saccadelab/rng.hpp"
#include "saccadelab/scanpath.hpp"
#include "saccadelab/tensor.hpp"

namespace saccadelab {

/// Memory value of the fixation made at past_index, seen from current_index:
/// max(alpha^(current-past), beta). Requires past_index <= current_index.
double memory_decay_value(int current_index, int past_index, double alpha, double beta);

/// Memory map over the grid: per past fixation a Gaussian of height a_t and
/// width sigma = config.sigma * image width, aggregated by elementwise max.
/// Empty history gives an all-zeros map. Returned unnormalized; the engine
/// normalizes before integration.
AttentionMap build_memory_map(const std::vector<Fixation>& history, const ModelConfig& config,
                              const GridSpec& grid);

/// Weighted linear combination of the four normalized maps. Not
/// renormalized; the argmax is scale-free.
AttentionMap combine_maps(const AttentionMap& m_sim, const AttentionMap& m_sal,
                          const AttentionMap& m_mem, const AttentionMap& m_sac,
                          const ModelConfig& config);

enum class SelectionRule { argmax, sample };

/// Winner-take-all or stochastic selection on a combined map. argmax breaks
/// ties at the lowest row-major index; sample shifts negative maps to
/// non-negative, normalizes to a distribution (uniform if flat-zero) and
/// draws one cell. Returns the cell center.
Vec2 next_fixation(const AttentionMap& combined, const GridSpec& grid,
                   SelectionRule selection, RngStream& rng);

struct ScanpathRun {
    Scanpath scanpath;
    GridSpec grid;
    AttentionMap similarity;               // normalized static map (search mode)
    AttentionMap saliency;                 // normalized static map (free viewing)
    std::vector<AttentionMap> memory_maps; // per update step, normalized
    std::vector<AttentionMap> saccade_maps;
    std::vector<AttentionMap> combined_maps;
    std::optional<double> drawn_w_mem;     // defective_memory ablation draw
};

struct RunOptions {
    bool keep_maps = false; // retain per-step maps for dumping
    int max_search_fixations = 80;
};

/// Full scanpath generation. Fixation 0 is the image center; each step
/// rebuilds the memory and saccade maps, combines them with the static
/// similarity (search) or saliency (free viewing) map and selects the next
/// fixation. Search stops at recognition distance below the threshold or at
/// the fixation cap; free viewing stops after N_c fixations. Deterministic
/// given (images, config, seed).
ScanpathRun run_scanpath(const ImageGrid& search_image, const ImageGrid* target_image,
                         const ModelConfig& config, const FeatureBackend& backend,
                         const SaccadePrior& prior, const std::string& trial_id = "trial",
                         const RunOptions& options = {});

/// One null-model step: a size drawn from the prior at a uniform direction,
/// rejection-resampled until inside bounds. Consumes only the current
/// position (memoryless).
Vec2 null_step(Vec2 current, const SaccadePrior& prior, double width_dva, double height_dva,
               RngStream& rng, int max_rejections = 1000);

/// Memoryless random scanpath constrained only by the saccade prior.
Scanpath run_null_model(const SaccadePrior& prior, int n_fixations, double width_dva,
                        double height_dva, RngStream& rng,
                        const std::string& trial_id = "null");

/// Ablated model run; variant must not be none.
ScanpathRun run_ablation(AblationVariant variant, const ImageGrid& search_image,
                         const ImageGrid* target_image, const ModelConfig& config,
                         const FeatureBackend& backend, const SaccadePrior& prior,
                         const std::string& trial_id = "trial", const RunOptions& options = {});

/// Working grid for an image: image pixels / 8, at least 1x1.
GridSpec working_grid(const ImageGrid& image);

} // namespace saccadelab
