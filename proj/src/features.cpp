#include "saccadelab/features.hpp"

#include <algorithm>
#include <cmath>

#include "lowlevel.hpp"
#include "saccadelab/errors.hpp"
#include "saccadelab/io.hpp"

namespace saccadelab {

using detail::Plane;

namespace {

FeatureTensor builtin_search_features(const ImageGrid& image, const FeatureBackend& backend) {
    const int rows = std::max(1, image.height / backend.cell_px);
    const int cols = std::max(1, image.width / backend.cell_px);
    std::vector<Plane> color = detail::base_planes(image);
    const int per_scale = static_cast<int>(color.size()) + backend.orientations;
    FeatureTensor tensor;
    tensor.channels = backend.scales * per_scale;
    tensor.height = rows;
    tensor.width = cols;
    tensor.stride_px = backend.cell_px;
    tensor.values.assign(static_cast<std::size_t>(tensor.channels) * rows * cols, 0.0f);

    int channel = 0;
    for (int s = 0; s < backend.scales; ++s) {
        for (const Plane& p : color) {
            Plane contrast = detail::local_contrast(p);
            detail::pool_to_grid(
                contrast, rows, cols,
                tensor.values.data() + static_cast<std::size_t>(channel++) * rows * cols);
        }
        const Plane& intensity = color[0];
        for (int k = 0; k < backend.orientations; ++k) {
            Plane energy = detail::abs_response(
                intensity,
                detail::kOrientedKernels[static_cast<std::size_t>(k) %
                                         detail::kOrientedKernels.size()]);
            detail::pool_to_grid(
                energy, rows, cols,
                tensor.values.data() + static_cast<std::size_t>(channel++) * rows * cols);
        }
        if (s + 1 < backend.scales)
            for (Plane& p : color) p = detail::downsample2(p);
    }
    return tensor;
}

FeatureTensor max_pool2(const FeatureTensor& in) {
    FeatureTensor out;
    out.channels = in.channels;
    out.height = (in.height + 1) / 2;
    out.width = (in.width + 1) / 2;
    out.stride_px = in.stride_px * 2.0;
    out.values.resize(static_cast<std::size_t>(out.channels) * out.height * out.width);
    for (int c = 0; c < in.channels; ++c) {
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                float best = in.at(c, 2 * y, 2 * x);
                if (2 * y + 1 < in.height) best = std::max(best, in.at(c, 2 * y + 1, 2 * x));
                if (2 * x + 1 < in.width) best = std::max(best, in.at(c, 2 * y, 2 * x + 1));
                if (2 * y + 1 < in.height && 2 * x + 1 < in.width)
                    best = std::max(best, in.at(c, 2 * y + 1, 2 * x + 1));
                out.at(c, y, x) = best;
            }
        }
    }
    return out;
}

} // namespace

FeatureTensor extract_features(const ImageGrid& image, const FeatureBackend& backend,
                               FeatureLevel level) {
    image.validate();
    if (backend.kind == FeatureBackend::Kind::import) {
        return read_feature_tensor(backend.import_path);
    }
    FeatureTensor search = builtin_search_features(image, backend);
    if (level == FeatureLevel::search_level) return search;
    return max_pool2(search);
}

AttentionMap compute_similarity_map(const FeatureTensor& search_features,
                                    const FeatureTensor& target_features) {
    if (search_features.channels != target_features.channels)
        throw DimensionError("similarity map: channel counts differ");
    if (target_features.height > search_features.height ||
        target_features.width > search_features.width)
        throw DimensionError("similarity map: target extent exceeds search extent");

    AttentionMap map;
    map.kind = MapKind::similarity;
    map.height = search_features.height;
    map.width = search_features.width;
    map.values.assign(static_cast<std::size_t>(map.height) * map.width, 0.0);
    for (int y = 0; y < map.height; ++y) {
        const int dy_max = std::min(target_features.height, search_features.height - y);
        for (int x = 0; x < map.width; ++x) {
            const int dx_max = std::min(target_features.width, search_features.width - x);
            double acc = 0.0;
            for (int c = 0; c < search_features.channels; ++c)
                for (int dy = 0; dy < dy_max; ++dy)
                    for (int dx = 0; dx < dx_max; ++dx)
                        acc += static_cast<double>(target_features.at(c, dy, dx)) *
                               search_features.at(c, y + dy, x + dx);
            map.at(y, x) = acc;
        }
    }
    return map;
}

AttentionMap compute_saliency_map(const FeatureTensor& search_features) {
    search_features.validate();
    AttentionMap map;
    map.kind = MapKind::saliency;
    map.height = search_features.height;
    map.width = search_features.width;
    map.values.assign(static_cast<std::size_t>(map.height) * map.width, 0.0);
    for (int c = 0; c < search_features.channels; ++c)
        for (int y = 0; y < map.height; ++y)
            for (int x = 0; x < map.width; ++x) map.at(y, x) += search_features.at(c, y, x);
    for (double& v : map.values) v /= search_features.channels;
    return map;
}

double cosine_distance(const std::vector<float>& a, const std::vector<float>& b) {
    if (a.size() != b.size()) throw DimensionError("cosine distance: vector lengths differ");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 2.0; // featureless patch matches nothing
    const double cosine = dot / (std::sqrt(na) * std::sqrt(nb));
    return std::clamp(1.0 - cosine, 0.0, 2.0);
}

namespace {

std::vector<float> feature_vector_at_native(const ImageGrid& image, const FeatureBackend& backend) {
    ImageGrid resized = image;
    if (backend.kind == FeatureBackend::Kind::builtin &&
        (image.width != backend.native_input_px || image.height != backend.native_input_px))
        resized = resize_bilinear(image, backend.native_input_px, backend.native_input_px);
    return extract_features(resized, backend, FeatureLevel::search_level).values;
}

} // namespace

double recognition_distance(const ImageGrid& image, Vec2 fixation_dva,
                            const ImageGrid& target_image, const FeatureBackend& backend,
                            double patch_dva) {
    if (!(patch_dva > 0.0)) throw std::domain_error("patch_dva must be positive");
    if (fixation_dva.x < 0.0 || fixation_dva.x > image.width_dva() || fixation_dva.y < 0.0 ||
        fixation_dva.y > image.height_dva())
        throw std::domain_error("fixation lies outside the image");
    const double side_px = patch_dva / image.dva_per_px;
    const ImageGrid patch = crop_clipped(image, fixation_dva.x / image.dva_per_px,
                                         fixation_dva.y / image.dva_per_px, side_px);
    const std::vector<float> patch_vec = feature_vector_at_native(patch, backend);
    const std::vector<float> target_vec = feature_vector_at_native(target_image, backend);
    return cosine_distance(patch_vec, target_vec);
}

AttentionMap compute_recognition_map(const ImageGrid& image, const ImageGrid& target_image,
                                     const FeatureBackend& backend, int stride_px) {
    if (stride_px < 1) throw std::domain_error("stride must be >= 1 pixel");
    image.validate();
    AttentionMap map;
    map.kind = MapKind::recognition;
    map.height = (image.height + stride_px - 1) / stride_px;
    map.width = (image.width + stride_px - 1) / stride_px;
    map.values.assign(static_cast<std::size_t>(map.height) * map.width, 0.0);
    const std::vector<float> target_vec = feature_vector_at_native(target_image, backend);
    for (int r = 0; r < map.height; ++r) {
        const double cy = std::min((r + 0.5) * stride_px, image.height - 0.5);
        for (int c = 0; c < map.width; ++c) {
            const double cx = std::min((c + 0.5) * stride_px, image.width - 0.5);
            const ImageGrid patch =
                crop_clipped(image, cx, cy, static_cast<double>(backend.native_input_px));
            const double d = cosine_distance(feature_vector_at_native(patch, backend), target_vec);
            map.at(r, c) = 1.0 - d;
        }
    }
    return map;
}

} // namespace saccadelab
