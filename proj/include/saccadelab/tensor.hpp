#pragma once

#include <string>
#include <vector>

namespace saccadelab {

/// C x H x W activations from a feature backend, channel-major row-major.
/// stride_px is the number of image pixels per feature cell.
struct FeatureTensor {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<float> values;
    double stride_px = 1.0;

    float at(int c, int y, int x) const {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float& at(int c, int y, int x) {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    void validate() const;
};

enum class MapKind { saliency, similarity, saccade, memory, combined, recognition };

std::string to_string(MapKind kind);

/// 2-D real-valued map over image space.
struct AttentionMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;
    MapKind kind = MapKind::saliency;
    bool normalized = false;

    double at(int y, int x) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
    double& at(int y, int x) {
        return values[static_cast<std::size_t>(y) * width + x];
    }

    void validate() const;
};

/// Min-max rescale to [0,1]. A flat map carries no preference and maps to
/// all zeros. Idempotent on non-degenerate inputs.
AttentionMap normalize_map(const AttentionMap& map);

/// Bilinear resample of a map to new dimensions (cell centers aligned to
/// the same physical extent).
AttentionMap resample_bilinear(const AttentionMap& map, int new_height, int new_width);

/// Index of the maximal value, ties broken by lowest row-major index.
std::size_t argmax_index(const std::vector<double>& values);

} // namespace saccadelab
