#pragma once

#include <string>

#include "saccadelab/image.hpp"
#include "saccadelab/tensor.hpp"

namespace saccadelab {

enum class FeatureLevel { target_level, search_level };

/// Deterministic feature source. The builtin backend is a multi-scale
/// low-level pyramid (intensity contrast, color opponency, oriented
/// derivative energy at 2 scales); the import backend replays a tensor file
/// so externally computed deep features can be dropped in.
struct FeatureBackend {
    enum class Kind { builtin, import };

    std::string name = "builtin";
    Kind kind = Kind::builtin;

    // builtin parameters
    int orientations = 4;
    int scales = 2;
    int native_input_px = 64; // recognition patches are resized to this side
    int cell_px = 8;          // search-level feature stride over the input

    // import parameter
    std::string import_path;

    static FeatureBackend builtin() { return {}; }
    static FeatureBackend import(std::string path) {
        FeatureBackend b;
        b.name = "import";
        b.kind = Kind::import;
        b.import_path = std::move(path);
        return b;
    }
};

/// Feature tensor for an image. For the builtin backend the target level is
/// the search level after one extra 2x2 max-pool; the import backend returns
/// the file contents unchanged at either level. Deterministic: identical
/// inputs give bit-identical tensors.
FeatureTensor extract_features(const ImageGrid& image, const FeatureBackend& backend,
                               FeatureLevel level);

/// Target modulation: 2-D cross-correlation of the target kernel over the
/// search features, summed over channels, zero-padded so output dims equal
/// the search dims.
AttentionMap compute_similarity_map(const FeatureTensor& search_features,
                                    const FeatureTensor& target_features);

/// Uniform modulation: per-cell mean over channels.
AttentionMap compute_saliency_map(const FeatureTensor& search_features);

/// 1 - cosine similarity of two feature vectors, in [0,2]. An all-zero
/// vector is maximally dissimilar to everything (distance 2).
double cosine_distance(const std::vector<float>& a, const std::vector<float>& b);

/// Recognition check at one fixation: crops a square patch of side patch_dva
/// centered at the fixation (clipped at the borders), resizes patch and
/// target to the backend's native input size, extracts both feature vectors
/// and returns their cosine distance.
double recognition_distance(const ImageGrid& image, Vec2 fixation_dva,
                            const ImageGrid& target_image, const FeatureBackend& backend,
                            double patch_dva);

/// Dense recognition confidence map on a stride grid, for diagnostics and
/// error-rate analysis. Patches are native-input-sized crops; cell values
/// store 1 - distance.
AttentionMap compute_recognition_map(const ImageGrid& image, const ImageGrid& target_image,
                                     const FeatureBackend& backend, int stride_px);

} // namespace saccadelab
