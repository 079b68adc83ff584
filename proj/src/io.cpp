#include "saccadelab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "saccadelab/errors.hpp"
#include "saccadelab/log.hpp"

namespace saccadelab {

// ---- helpers ----------------------------------------------------------------

double parse_double(const std::string& text, const std::string& origin) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(origin + ": invalid number '" + text + "'");
    return value;
}

long long parse_integer(const std::string& text, const std::string& origin) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError(origin + ": invalid integer '" + text + "'");
    return value;
}

std::string format_double(double v) {
    char buf[40];
    // Shortest form that round-trips; try increasing precision.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        auto [ptr, ec] = std::from_chars(buf, buf + std::strlen(buf), back);
        (void)ptr;
        if (ec == std::errc() && back == v) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write file '" + path + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw FormatError("short write to '" + path + "'");
}

namespace {

std::vector<unsigned char> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return bytes;
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xFF));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::vector<unsigned char>& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

std::uint16_t get_u16(const std::vector<unsigned char>& in, std::size_t at) {
    return static_cast<std::uint16_t>(in[at] | (in[at + 1] << 8));
}

std::uint32_t get_u32(const std::vector<unsigned char>& in, std::size_t at) {
    return static_cast<std::uint32_t>(in[at]) | (static_cast<std::uint32_t>(in[at + 1]) << 8) |
           (static_cast<std::uint32_t>(in[at + 2]) << 16) |
           (static_cast<std::uint32_t>(in[at + 3]) << 24);
}

float get_f32(const std::vector<unsigned char>& in, std::size_t at) {
    const std::uint32_t bits = get_u32(in, at);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

// ---- fixation log CSV --------------------------------------------------------

static const char* kLogHeader =
    "subject_id,trial_id,fixation_index,x_dva,y_dva,duration_ms,stop_reason,source";

std::string fixation_log_to_csv(const std::vector<Scanpath>& scanpaths) {
    std::string out(kLogHeader);
    out.push_back('\n');
    for (const Scanpath& sp : scanpaths) {
        for (const Fixation& f : sp.fixations) {
            out += sp.subject_id;
            out.push_back(',');
            out += sp.trial_id;
            out.push_back(',');
            out += std::to_string(f.index);
            out.push_back(',');
            out += format_double(f.x_dva);
            out.push_back(',');
            out += format_double(f.y_dva);
            out.push_back(',');
            if (f.duration_ms) out += format_double(*f.duration_ms);
            out.push_back(',');
            out += to_string(sp.stop_reason);
            out.push_back(',');
            out += to_string(sp.source);
            out.push_back('\n');
        }
    }
    return out;
}

void write_fixation_log(const std::string& path, const std::vector<Scanpath>& scanpaths) {
    write_text_file(path, fixation_log_to_csv(scanpaths));
}

std::vector<Scanpath> parse_fixation_log_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(origin + ":1: missing header row");
    if (trim(line) != kLogHeader)
        throw ParseError(origin + ":1: unexpected header '" + trim(line) + "'");

    std::vector<Scanpath> scanpaths;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> f = split_csv_row(line);
        const std::string at = origin + ":" + std::to_string(line_no);
        if (f.size() != 8) throw ParseError(at + ": expected 8 fields, got " +
                                            std::to_string(f.size()));
        Fixation fix;
        fix.index = static_cast<int>(parse_integer(f[2], at));
        fix.x_dva = parse_double(f[3], at);
        fix.y_dva = parse_double(f[4], at);
        if (!f[5].empty()) fix.duration_ms = parse_double(f[5], at);

        const auto key = std::make_pair(f[0], f[1]);
        auto it = index.find(key);
        if (it == index.end()) {
            Scanpath sp;
            sp.subject_id = f[0];
            sp.trial_id = f[1];
            sp.source = ScanpathSource::experimental;
            index.emplace(key, scanpaths.size());
            scanpaths.push_back(std::move(sp));
            it = index.find(key);
        }
        Scanpath& sp = scanpaths[it->second];
        try {
            sp.stop_reason = stop_reason_from_string(f[6]);
            sp.source = source_from_string(f[7]);
        } catch (const ParseError& e) {
            throw ParseError(at + ": " + e.what());
        }
        sp.fixations.push_back(fix);
    }
    for (const Scanpath& sp : scanpaths) {
        for (std::size_t i = 0; i < sp.fixations.size(); ++i) {
            if (sp.fixations[i].index != static_cast<int>(i))
                throw ParseError(origin + ": trial '" + sp.trial_id + "' subject '" +
                                 sp.subject_id + "' has non-contiguous fixation indices");
        }
    }
    return scanpaths;
}

std::vector<Scanpath> parse_fixation_log(const std::string& path) {
    return parse_fixation_log_text(read_text_file(path), path);
}

// ---- FMAP ---------------------------------------------------------------------

std::vector<unsigned char> encode_feature_tensor(const FeatureTensor& tensor) {
    tensor.validate();
    std::vector<unsigned char> out;
    out.reserve(22 + tensor.values.size() * 4);
    out.insert(out.end(), {'F', 'M', 'A', 'P'});
    put_u16(out, 1);
    put_u32(out, static_cast<std::uint32_t>(tensor.channels));
    put_u32(out, static_cast<std::uint32_t>(tensor.height));
    put_u32(out, static_cast<std::uint32_t>(tensor.width));
    put_f32(out, static_cast<float>(tensor.stride_px));
    for (float v : tensor.values) put_f32(out, v);
    return out;
}

FeatureTensor decode_feature_tensor(const std::vector<unsigned char>& bytes,
                                    const std::string& origin) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "FMAP", 4) != 0)
        throw FormatError(origin + ": bad magic at byte 0 (expected \"FMAP\")");
    if (bytes.size() < 22) throw FormatError(origin + ": truncated header at byte " +
                                             std::to_string(bytes.size()));
    const std::uint16_t version = get_u16(bytes, 4);
    if (version != 1)
        throw FormatError(origin + ": unsupported version " + std::to_string(version) +
                          " at byte 4");
    FeatureTensor tensor;
    tensor.channels = static_cast<int>(get_u32(bytes, 6));
    tensor.height = static_cast<int>(get_u32(bytes, 10));
    tensor.width = static_cast<int>(get_u32(bytes, 14));
    tensor.stride_px = get_f32(bytes, 18);
    if (tensor.channels <= 0 || tensor.height <= 0 || tensor.width <= 0)
        throw FormatError(origin + ": zero-sized tensor dimensions in header at byte 6");
    if (static_cast<std::uint64_t>(tensor.channels) * tensor.height * tensor.width >
        (1ull << 31))
        throw FormatError(origin + ": implausible tensor dimensions in header at byte 6");
    const std::size_t n = static_cast<std::size_t>(tensor.channels) * tensor.height * tensor.width;
    const std::size_t expected = 22 + 4 * n;
    if (bytes.size() != expected)
        throw FormatError(origin + ": value payload length mismatch, expected " +
                          std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
    tensor.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) tensor.values[i] = get_f32(bytes, 22 + 4 * i);
    tensor.validate();
    return tensor;
}

void write_feature_tensor(const std::string& path, const FeatureTensor& tensor) {
    const std::vector<unsigned char> bytes = encode_feature_tensor(tensor);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write file '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("short write to '" + path + "'");
}

FeatureTensor read_feature_tensor(const std::string& path) {
    return decode_feature_tensor(read_binary_file(path), path);
}

// ---- PGM / PPM / PNG -----------------------------------------------------------

namespace {

ImageGrid parse_pnm(const std::vector<unsigned char>& bytes, const std::string& origin) {
    std::size_t at = 0;
    auto next_token = [&]() -> std::string {
        while (at < bytes.size()) {
            if (std::isspace(bytes[at])) {
                ++at;
            } else if (bytes[at] == '#') {
                while (at < bytes.size() && bytes[at] != '\n') ++at;
            } else {
                break;
            }
        }
        const std::size_t start = at;
        while (at < bytes.size() && !std::isspace(bytes[at])) ++at;
        if (start == at)
            throw FormatError(origin + ": truncated header at byte " + std::to_string(at));
        return std::string(bytes.begin() + static_cast<long>(start),
                           bytes.begin() + static_cast<long>(at));
    };

    const std::string magic = next_token();
    const int channels = magic == "P5" ? 1 : magic == "P6" ? 3 : 0;
    if (channels == 0)
        throw FormatError(origin + ": unsupported format '" + magic + "' at byte 0");
    const long long w = parse_integer(next_token(), origin);
    const long long h = parse_integer(next_token(), origin);
    const long long maxval = parse_integer(next_token(), origin);
    if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw FormatError(origin + ": unsupported header values at byte " + std::to_string(at));
    ++at; // single whitespace after maxval
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels;
    if (bytes.size() - at < n)
        throw FormatError(origin + ": pixel payload truncated at byte " +
                          std::to_string(bytes.size()) + ", expected " +
                          std::to_string(at + n) + " bytes");

    ImageGrid img;
    img.width = static_cast<int>(w);
    img.height = static_cast<int>(h);
    img.channels = channels;
    img.pixels.resize(n);
    const float scale = 1.0f / static_cast<float>(maxval);
    // PNM is pixel-interleaved; ImageGrid is channel-major.
    for (long long y = 0; y < h; ++y)
        for (long long x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c)
                img.at(c, static_cast<int>(y), static_cast<int>(x)) =
                    scale * bytes[at + static_cast<std::size_t>((y * w + x) * channels + c)];
    return img;
}

bool has_png_magic(const std::vector<unsigned char>& bytes) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
    return bytes.size() >= 8 && std::memcmp(bytes.data(), sig, 8) == 0;
}

} // namespace

ImageGrid load_image(const std::string& path) {
    const std::vector<unsigned char> bytes = read_binary_file(path);
    if (has_png_magic(bytes)) return detail::load_png(path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6'))
        return parse_pnm(bytes, path);
    throw FormatError(path + ": unsupported raster format (expected PNG, P5 PGM or P6 PPM)");
}

void write_pgm(const std::string& path, const ImageGrid& image) {
    if (image.channels != 1) throw DimensionError("write_pgm expects a 1-channel image");
    std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                      "\n255\n";
    out.reserve(out.size() + static_cast<std::size_t>(image.width) * image.height);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            out.push_back(static_cast<char>(
                static_cast<unsigned char>(std::lround(image.at(0, y, x) * 255.0f))));
    write_text_file(path, out);
}

void write_ppm(const std::string& path, const ImageGrid& image) {
    if (image.channels != 3) throw DimensionError("write_ppm expects a 3-channel image");
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) +
                      "\n255\n";
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < 3; ++c)
                out.push_back(static_cast<char>(
                    static_cast<unsigned char>(std::lround(image.at(c, y, x) * 255.0f))));
    write_text_file(path, out);
}

// ---- trial manifest -------------------------------------------------------------

void TrialManifest::validate() const {
    if (trial_id.empty()) throw ConfigError("manifest trial is missing trial_id");
    if (search_image_path.empty())
        throw ConfigError("trial '" + trial_id + "' is missing search_image_path");
    if (!(image_width_dva > 0.0) || !(image_height_dva > 0.0))
        throw ConfigError("trial '" + trial_id + "' needs positive image dimensions in dva");
    if (task == TaskMode::visual_search && !target_image_path)
        throw ConfigError("visual_search trial '" + trial_id + "' must carry a target image");
}

std::vector<TrialManifest> parse_manifest_text(const std::string& text,
                                               const std::string& origin) {
    std::vector<TrialManifest> trials;
    std::istringstream in(text);
    std::string line;
    TrialManifest cur;
    bool open = false;
    int line_no = 0;
    auto flush = [&]() {
        if (!open) return;
        cur.validate();
        trials.push_back(cur);
        cur = TrialManifest{};
        open = false;
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) {
            flush();
            continue;
        }
        const std::string at = origin + ":" + std::to_string(line_no);
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(at + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        open = true;
        if (key == "trial_id") {
            cur.trial_id = value;
        } else if (key == "search_image_path") {
            cur.search_image_path = value;
        } else if (key == "target_image_path") {
            cur.target_image_path = value;
        } else if (key == "target_box_dva") {
            std::istringstream vs(value);
            RectDva box;
            if (!(vs >> box.x_min >> box.y_min >> box.x_max >> box.y_max))
                throw ParseError(at + ": target_box_dva expects 4 numbers");
            cur.target_box_dva = box;
        } else if (key == "image_width_dva") {
            cur.image_width_dva = parse_double(value, at);
        } else if (key == "image_height_dva") {
            cur.image_height_dva = parse_double(value, at);
        } else if (key == "task") {
            cur.task = task_mode_from_string(value);
        } else {
            throw ParseError(at + ": unknown manifest key '" + key + "'");
        }
    }
    flush();
    return trials;
}

std::vector<TrialManifest> parse_manifest(const std::string& path) {
    return parse_manifest_text(read_text_file(path), path);
}

std::string manifest_to_text(const std::vector<TrialManifest>& trials) {
    std::string out;
    for (const TrialManifest& t : trials) {
        out += "trial_id = " + t.trial_id + "\n";
        out += "search_image_path = " + t.search_image_path + "\n";
        if (t.target_image_path) out += "target_image_path = " + *t.target_image_path + "\n";
        if (t.target_box_dva) {
            out += "target_box_dva = " + format_double(t.target_box_dva->x_min) + " " +
                   format_double(t.target_box_dva->y_min) + " " +
                   format_double(t.target_box_dva->x_max) + " " +
                   format_double(t.target_box_dva->y_max) + "\n";
        }
        out += "image_width_dva = " + format_double(t.image_width_dva) + "\n";
        out += "image_height_dva = " + format_double(t.image_height_dva) + "\n";
        out += "task = " + to_string(t.task) + "\n\n";
    }
    return out;
}

// ---- model config ----------------------------------------------------------------

ModelConfig parse_model_config_text(const std::string& text, const std::string& origin) {
    ModelConfig cfg;
    bool saw_w_sim = false, saw_w_sal = false, saw_mode = false;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::string at = origin + ":" + std::to_string(line_no);
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(at + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key == "alpha") cfg.alpha = parse_double(value, at);
        else if (key == "beta") cfg.beta = parse_double(value, at);
        else if (key == "sigma") cfg.sigma = parse_double(value, at);
        else if (key == "w_mem") cfg.w_mem = parse_double(value, at);
        else if (key == "w_sac") cfg.w_sac = parse_double(value, at);
        else if (key == "w_sim") { cfg.w_sim = parse_double(value, at); saw_w_sim = true; }
        else if (key == "w_sal") { cfg.w_sal = parse_double(value, at); saw_w_sal = true; }
        else if (key == "recognition_threshold") cfg.recognition_threshold = parse_double(value, at);
        else if (key == "patch_dva") cfg.patch_dva = parse_double(value, at);
        else if (key == "N_c") cfg.n_free_viewing_fixations = static_cast<int>(parse_integer(value, at));
        else if (key == "return_threshold_dva") cfg.return_threshold_dva = parse_double(value, at);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(value, at));
        else if (key == "mode") { cfg.mode = task_mode_from_string(value); saw_mode = true; }
        else if (key == "ablation") cfg.ablation = ablation_from_string(value);
        else throw ParseError(at + ": unknown config key '" + key + "'");
    }
    (void)saw_mode;
    if (!saw_w_sim && !saw_w_sal) cfg.apply_mode_defaults();
    cfg.validate();
    return cfg;
}

ModelConfig parse_model_config(const std::string& path) {
    return parse_model_config_text(read_text_file(path), path);
}

std::string model_config_to_text(const ModelConfig& config) {
    std::string out;
    out += "alpha = " + format_double(config.alpha) + "\n";
    out += "beta = " + format_double(config.beta) + "\n";
    out += "sigma = " + format_double(config.sigma) + "\n";
    out += "w_mem = " + format_double(config.w_mem) + "\n";
    out += "w_sac = " + format_double(config.w_sac) + "\n";
    out += "w_sim = " + format_double(config.w_sim) + "\n";
    out += "w_sal = " + format_double(config.w_sal) + "\n";
    out += "recognition_threshold = " + format_double(config.recognition_threshold) + "\n";
    out += "patch_dva = " + format_double(config.patch_dva) + "\n";
    out += "N_c = " + std::to_string(config.n_free_viewing_fixations) + "\n";
    out += "return_threshold_dva = " + format_double(config.return_threshold_dva) + "\n";
    out += "seed = " + std::to_string(config.seed) + "\n";
    out += "mode = " + to_string(config.mode) + "\n";
    out += "ablation = " + to_string(config.ablation) + "\n";
    return out;
}

// ---- egocentric --------------------------------------------------------------

void EgocentricClip::validate() const {
    if (!(fps > 0.0)) throw ConfigError("clip '" + clip_id + "' needs a positive frame rate");
    if (frame_count <= 0) throw ConfigError("clip '" + clip_id + "' has no frames");
    if (static_cast<int>(gaze_by_frame.size()) != frame_count)
        throw DimensionError("clip '" + clip_id + "' gaze length does not match frame_count");
    if (std::fabs(frame_count - 5.0 * fps) > fps)
        throw ConfigError("clip '" + clip_id + "' is not a five-second segment");
}

std::optional<std::vector<std::pair<int, Vec2>>> preprocess_egocentric_clip(
    const EgocentricClip& clip, double motion_threshold, int max_gap_frames) {
    clip.validate();
    if (!egocentric_gate(clip.first_frame, clip.last_frame, motion_threshold))
        return std::nullopt;
    return interpolate_missing_fixations(clip.gaze_by_frame, max_gap_frames);
}

double normalized_frame_distance(const ImageGrid& first, const ImageGrid& last) {
    if (first.width != last.width || first.height != last.height ||
        first.channels != last.channels)
        throw DimensionError("frame distance: frame dimensions differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < first.pixels.size(); ++i) {
        const double d = static_cast<double>(first.pixels[i]) - last.pixels[i];
        acc += d * d;
    }
    return std::sqrt(acc) / static_cast<double>(first.pixels.size());
}

bool egocentric_gate(const ImageGrid& first, const ImageGrid& last, double threshold) {
    return normalized_frame_distance(first, last) <= threshold;
}

std::optional<std::vector<std::pair<int, Vec2>>> interpolate_missing_fixations(
    const std::vector<std::optional<Vec2>>& gaze_by_frame, int max_gap_frames) {
    // Reject on any run of missing frames longer than the cap, edges included.
    int run = 0;
    for (const auto& g : gaze_by_frame) {
        run = g.has_value() ? 0 : run + 1;
        if (run > max_gap_frames) return std::nullopt;
    }

    std::vector<std::pair<int, Vec2>> out;
    const int n = static_cast<int>(gaze_by_frame.size());
    int prev_known = -1;
    for (int i = 0; i < n; ++i) {
        if (!gaze_by_frame[i].has_value()) continue;
        if (prev_known >= 0 && i - prev_known > 1) {
            const Vec2 a = *gaze_by_frame[prev_known];
            const Vec2 b = *gaze_by_frame[i];
            for (int k = prev_known + 1; k < i; ++k) {
                const double t = static_cast<double>(k - prev_known) / (i - prev_known);
                out.emplace_back(k, Vec2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
            }
        }
        out.emplace_back(i, *gaze_by_frame[i]);
        prev_known = i;
    }
    return out;
}

} // namespace saccadelab
