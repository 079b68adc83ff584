#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saccadelab/geometry.hpp"
#include "saccadelab/image.hpp"
#include "saccadelab/scanpath.hpp"
#include "saccadelab/tensor.hpp"

namespace saccadelab {

// ---- fixation log CSV -----------------------------------------------------
// Header: subject_id,trial_id,fixation_index,x_dva,y_dva,duration_ms,
//         stop_reason,source
// duration_ms is empty for model runs. Rows group into scanpaths by
// (subject_id, trial_id) in first-appearance order; indices must be
// contiguous from 0.

std::vector<Scanpath> parse_fixation_log(const std::string& path);
std::vector<Scanpath> parse_fixation_log_text(const std::string& text,
                                              const std::string& origin = "<memory>");
std::string fixation_log_to_csv(const std::vector<Scanpath>& scanpaths);
void write_fixation_log(const std::string& path, const std::vector<Scanpath>& scanpaths);

// ---- feature tensor file (FMAP) --------------------------------------------
// Magic "FMAP", u16 LE version = 1, u32 LE C, u32 LE H, u32 LE W,
// f32 LE stride_px, then C*H*W f32 LE values channel-major row-major.

std::vector<unsigned char> encode_feature_tensor(const FeatureTensor& tensor);
FeatureTensor decode_feature_tensor(const std::vector<unsigned char>& bytes,
                                    const std::string& origin = "<memory>");
void write_feature_tensor(const std::string& path, const FeatureTensor& tensor);
FeatureTensor read_feature_tensor(const std::string& path);

// ---- raster images ----------------------------------------------------------
// PNG and binary PGM (P5) / PPM (P6); pixels scaled to [0,1]. The dva scale
// is not stored in these formats and defaults to 1; callers set it from the
// trial manifest.

ImageGrid load_image(const std::string& path);
void write_pgm(const std::string& path, const ImageGrid& image);
void write_ppm(const std::string& path, const ImageGrid& image);

namespace detail {
ImageGrid load_png(const std::string& path);
void write_png(const std::string& path, const ImageGrid& image);
}

// ---- trial manifest ---------------------------------------------------------
// Flat key-value text blocks separated by blank lines, one block per trial.

struct TrialManifest {
    std::string trial_id;
    std::string search_image_path;
    std::optional<std::string> target_image_path;
    std::optional<RectDva> target_box_dva;
    double image_width_dva = 0.0;
    double image_height_dva = 0.0;
    TaskMode task = TaskMode::free_viewing;

    void validate() const;
};

std::vector<TrialManifest> parse_manifest(const std::string& path);
std::vector<TrialManifest> parse_manifest_text(const std::string& text,
                                               const std::string& origin = "<memory>");
std::string manifest_to_text(const std::vector<TrialManifest>& trials);

// ---- model config file ------------------------------------------------------
// Flat `key = value` lines; keys match the ModelConfig field names exactly
// (alpha, beta, sigma, w_mem, w_sac, w_sim, w_sal, recognition_threshold,
// patch_dva, N_c, return_threshold_dva, seed, mode, ablation). Numeric
// parsing is locale-independent.

ModelConfig parse_model_config(const std::string& path);
ModelConfig parse_model_config_text(const std::string& text,
                                    const std::string& origin = "<memory>");
std::string model_config_to_text(const ModelConfig& config);

// ---- egocentric preprocessing ------------------------------------------------

/// One egocentric video segment: bounding frames plus per-frame gaze.
/// Clips are cut to five seconds of video, so frame_count should sit within
/// one second's worth of 5 * fps.
struct EgocentricClip {
    std::string clip_id;
    int frame_count = 0;
    double fps = 24.0;
    std::vector<std::optional<Vec2>> gaze_by_frame;
    ImageGrid first_frame;
    ImageGrid last_frame;

    void validate() const;
};

/// Pixel-level Euclidean distance between two equal-shaped frames divided by
/// the number of pixel values. Clips pass the head-motion gate iff the
/// distance is <= the threshold (inclusive), 0.4 by default.
double normalized_frame_distance(const ImageGrid& first, const ImageGrid& last);
bool egocentric_gate(const ImageGrid& first, const ImageGrid& last, double threshold = 0.4);

/// Full preprocessing for one clip: head-motion gate, gap check and linear
/// interpolation. Rejected clips come back empty.
std::optional<std::vector<std::pair<int, Vec2>>> preprocess_egocentric_clip(
    const EgocentricClip& clip, double motion_threshold = 0.4, int max_gap_frames = 14);

/// Gaze samples indexed by frame; missing frames are gaps. Rejects the clip
/// (nullopt) when any gap exceeds max_gap_frames; otherwise fills interior
/// gaps by linear interpolation and drops unfillable leading/trailing frames.
std::optional<std::vector<std::pair<int, Vec2>>> interpolate_missing_fixations(
    const std::vector<std::optional<Vec2>>& gaze_by_frame, int max_gap_frames = 14);

// ---- small helpers ------------------------------------------------------------

/// Locale-independent decimal parse; throws ParseError naming the origin.
double parse_double(const std::string& text, const std::string& origin);
long long parse_integer(const std::string& text, const std::string& origin);

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

} // namespace saccadelab
