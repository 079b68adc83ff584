#include "saccadelab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <thread>

#include "saccadelab/engine.hpp"
#include "saccadelab/errors.hpp"
#include "saccadelab/gbvs.hpp"
#include "saccadelab/io.hpp"
#include "saccadelab/log.hpp"
#include "saccadelab/metrics.hpp"
#include "saccadelab/svg.hpp"

namespace fs = std::filesystem;

namespace saccadelab {

namespace {

// Collects output files so a failed run can remove everything it wrote.
class OutputSession {
public:
    OutputSession(const std::string& out_dir, bool force) : dir_(out_dir), force_(force) {
        fs::create_directories(dir_);
    }

    std::string path(const std::string& name) {
        const std::string full = (fs::path(dir_) / name).string();
        if (!force_ && fs::exists(full))
            throw ConfigError("output file '" + full + "' exists; pass --force to overwrite");
        written_.push_back(full);
        return full;
    }

    void write_text(const std::string& name, const std::string& contents) {
        write_text_file(path(name), contents);
    }

    void commit() { written_.clear(); }

    ~OutputSession() {
        // Roll back partial outputs on failure.
        for (const std::string& p : written_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }

private:
    std::string dir_;
    bool force_;
    std::vector<std::string> written_;
};

struct LoadedTrial {
    TrialManifest manifest;
    ImageGrid search_image;
    std::optional<ImageGrid> target_image;
};

LoadedTrial load_trial(const TrialManifest& manifest) {
    LoadedTrial trial;
    trial.manifest = manifest;
    trial.search_image = load_image(manifest.search_image_path);
    trial.search_image.dva_per_px = manifest.image_width_dva / trial.search_image.width;
    const double height_dva = trial.search_image.height * trial.search_image.dva_per_px;
    if (std::fabs(height_dva - manifest.image_height_dva) > 0.01 * manifest.image_height_dva)
        log_warn("trial '" + manifest.trial_id + "': image aspect ratio does not match the " +
                 "declared dva extent; using the width-derived scale");
    if (manifest.target_image_path) {
        ImageGrid target = load_image(*manifest.target_image_path);
        target.dva_per_px = trial.search_image.dva_per_px;
        trial.target_image = std::move(target);
    }
    return trial;
}

ModelConfig load_config(const RunSpec& spec) {
    ModelConfig cfg;
    if (spec.config_path) cfg = parse_model_config(*spec.config_path);
    else cfg.apply_mode_defaults();
    if (spec.seed_override) cfg.seed = *spec.seed_override;
    if (spec.threshold_override_dva) cfg.return_threshold_dva = *spec.threshold_override_dva;
    cfg.validate();
    return cfg;
}

ModelConfig config_for_trial(const ModelConfig& base, const TrialManifest& manifest) {
    ModelConfig cfg = base;
    if (cfg.mode != manifest.task) {
        cfg.mode = manifest.task;
        cfg.apply_mode_defaults();
    }
    return cfg;
}

SaccadePrior prior_from_spec(const RunSpec& spec) {
    if (!spec.dataset_paths.empty()) {
        std::vector<Scanpath> pooled;
        for (const std::string& path : spec.dataset_paths) {
            std::vector<Scanpath> part = parse_fixation_log(path);
            pooled.insert(pooled.end(), part.begin(), part.end());
        }
        return fit_saccade_prior(pooled);
    }
    return default_gamma_prior();
}

// Run one job per trial on up to `jobs` workers; results land in trial order
// so downstream writes do not depend on scheduling.
template <typename Fn>
void parallel_trials(std::size_t n, int jobs, Fn&& fn) {
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

FeatureTensor map_as_tensor(const AttentionMap& map, double stride_px) {
    FeatureTensor t;
    t.channels = 1;
    t.height = map.height;
    t.width = map.width;
    t.stride_px = stride_px;
    t.values.assign(map.values.begin(), map.values.end());
    return t;
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_left,bin_right,probability\n";
    const Histogram n = h.normalized ? h : h.normalize();
    for (std::size_t i = 0; i < n.values.size(); ++i)
        out += format_double(n.bin_edges[i]) + "," + format_double(n.bin_edges[i + 1]) + "," +
               format_double(n.values[i]) + "\n";
    return out;
}

std::string stat_row(const std::string& experiment, const std::string& cls,
                     const std::string& statistic, const std::optional<StatSummary>& s) {
    if (!s) return experiment + "," + cls + "," + statistic + ",,0\n";
    return experiment + "," + cls + "," + statistic + "," + format_double(s->mean) + "," +
           std::to_string(s->n) + "\n";
}

void dump_run_maps(OutputSession& out, const std::string& trial_id, const LoadedTrial& trial,
                   const ScanpathRun& run, const FeatureBackend& backend) {
    const double cell_px = static_cast<double>(trial.search_image.width) / run.grid.cols;
    write_feature_tensor(
        out.path(trial_id + "_search_features.fmap"),
        extract_features(trial.search_image, backend, FeatureLevel::search_level));
    if (trial.target_image)
        write_feature_tensor(
            out.path(trial_id + "_target_features.fmap"),
            extract_features(*trial.target_image, backend, FeatureLevel::target_level));
    write_feature_tensor(out.path(trial_id + "_msim.fmap"), map_as_tensor(run.similarity, cell_px));
    write_feature_tensor(out.path(trial_id + "_msal.fmap"), map_as_tensor(run.saliency, cell_px));
    char idx[16];
    for (std::size_t s = 0; s < run.memory_maps.size(); ++s) {
        std::snprintf(idx, sizeof(idx), "%03zu", s);
        write_feature_tensor(out.path(trial_id + "_mmem_" + idx + ".fmap"),
                             map_as_tensor(run.memory_maps[s], cell_px));
        write_feature_tensor(out.path(trial_id + "_msac_" + idx + ".fmap"),
                             map_as_tensor(run.saccade_maps[s], cell_px));
        write_feature_tensor(out.path(trial_id + "_mf_" + idx + ".fmap"),
                             map_as_tensor(run.combined_maps[s], cell_px));
    }
}

std::vector<Scanpath> load_datasets(const RunSpec& spec) {
    if (spec.dataset_paths.empty())
        throw ConfigError("this command needs at least one fixation log");
    std::vector<Scanpath> pooled;
    for (const std::string& path : spec.dataset_paths) {
        std::vector<Scanpath> part = parse_fixation_log(path);
        pooled.insert(pooled.end(), part.begin(), part.end());
    }
    return pooled;
}

struct ReferenceStats {
    double return_proportion = 0.0;
    std::optional<double> mean_offset;
    std::optional<double> mean_saccade_size;
    std::optional<double> mean_angle_return;
    std::optional<double> mean_angle_nonreturn;
};

ReferenceStats dataset_stats(const std::vector<Scanpath>& scanpaths, double threshold) {
    ReferenceStats stats;
    stats.return_proportion = proportion_return(scanpaths, threshold).subject_mean;
    std::vector<double> offsets, sizes, angles_ret, angles_non;
    for (const Scanpath& sp : scanpaths) {
        const ReturnAnnotation ann = detect_return_fixations(sp, threshold);
        for (int o : return_offsets(ann)) offsets.push_back(o);
        for (std::size_t t = 1; t < sp.size(); ++t)
            sizes.push_back(distance(sp.fixations[t].pos(), sp.fixations[t - 1].pos()));
        for (const auto& [angle, is_return] : turning_angle_samples(sp, ann))
            (is_return ? angles_ret : angles_non).push_back(angle);
    }
    if (auto s = summarize(offsets)) stats.mean_offset = s->mean;
    if (auto s = summarize(sizes)) stats.mean_saccade_size = s->mean;
    if (auto s = summarize(angles_ret)) stats.mean_angle_return = s->mean;
    if (auto s = summarize(angles_non)) stats.mean_angle_nonreturn = s->mean;
    return stats;
}

std::string optional_stat(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

} // namespace

int cmd_simulate(const RunSpec& spec) {
    if (!spec.manifest_path) throw ConfigError("simulate needs --manifest");
    const ModelConfig base_config = load_config(spec);
    const std::vector<TrialManifest> manifest = parse_manifest(*spec.manifest_path);
    if (manifest.empty()) throw ConfigError("manifest has no trials");
    const SaccadePrior prior = prior_from_spec(spec);
    const FeatureBackend backend = FeatureBackend::builtin();

    std::vector<LoadedTrial> trials(manifest.size());
    std::vector<ScanpathRun> runs(manifest.size());
    RunOptions options;
    options.keep_maps = spec.dump_maps;

    parallel_trials(manifest.size(), spec.jobs, [&](std::size_t i) {
        try {
            trials[i] = load_trial(manifest[i]);
            const ModelConfig cfg = config_for_trial(base_config, manifest[i]);
            const ImageGrid* target =
                trials[i].target_image ? &*trials[i].target_image : nullptr;
            runs[i] = run_scanpath(trials[i].search_image, target, cfg, backend, prior,
                                   manifest[i].trial_id, options);
        } catch (const std::exception& e) {
            throw ConfigError("trial '" + manifest[i].trial_id + "' failed: " + e.what());
        }
    });

    OutputSession out(spec.out_dir, spec.force);
    std::vector<Scanpath> scanpaths;
    scanpaths.reserve(runs.size());
    for (const ScanpathRun& run : runs) scanpaths.push_back(run.scanpath);
    out.write_text("scanpaths.csv", fixation_log_to_csv(scanpaths));
    if (spec.dump_maps)
        for (std::size_t i = 0; i < runs.size(); ++i)
            dump_run_maps(out, manifest[i].trial_id, trials[i], runs[i], backend);
    out.commit();
    log_info("simulate: wrote " + std::to_string(scanpaths.size()) + " scanpaths to " +
             spec.out_dir);
    return 0;
}

int cmd_analyze(const RunSpec& spec) {
    const std::vector<Scanpath> scanpaths = load_datasets(spec);
    if (scanpaths.empty()) throw ConfigError("datasets contain no scanpaths");
    const double threshold = spec.threshold_override_dva.value_or(1.0);

    std::vector<ReturnAnnotation> annotations;
    annotations.reserve(scanpaths.size());
    for (const Scanpath& sp : scanpaths)
        annotations.push_back(detect_return_fixations(sp, threshold));

    OutputSession out(spec.out_dir, spec.force);

    // Return proportions: full, first six, and twice-revisited variants.
    {
        const ProportionResult full = proportion_return(scanpaths, threshold);
        ProportionOptions first6;
        first6.first_k = 6;
        const ProportionResult first = proportion_return(scanpaths, threshold, first6);
        ProportionOptions twice;
        twice.twice_only = true;
        const ProportionResult two = proportion_return(scanpaths, threshold, twice);
        std::string csv = "experiment,class,statistic,value,n\n";
        csv += "analysis,all,return_proportion," + format_double(full.subject_mean) + "," +
               std::to_string(scanpaths.size()) + "\n";
        csv += "analysis,all,return_proportion_first6," + format_double(first.subject_mean) +
               "," + std::to_string(scanpaths.size()) + "\n";
        csv += "analysis,all,return_proportion_twice," + format_double(two.subject_mean) + "," +
               std::to_string(scanpaths.size()) + "\n";
        for (const auto& [subject, mean] : full.per_subject_mean)
            csv += "analysis," + subject + ",return_proportion," + format_double(mean) + ",\n";
        out.write_text("proportion_returns.csv", csv);
    }

    // Return offsets.
    std::vector<int> offsets;
    for (const ReturnAnnotation& ann : annotations)
        for (int o : return_offsets(ann)) offsets.push_back(o);
    const Histogram offset_hist = offset_histogram(offsets);
    out.write_text("return_offsets.csv", histogram_csv(offset_hist));

    // Turning angles.
    std::vector<double> angles_ret, angles_non;
    for (std::size_t i = 0; i < scanpaths.size(); ++i)
        for (const auto& [angle, is_return] : turning_angle_samples(scanpaths[i], annotations[i]))
            (is_return ? angles_ret : angles_non).push_back(angle);
    const Histogram angle_ret_hist = make_histogram(angles_ret, 12.0, 0.0, 180.0);
    const Histogram angle_non_hist = make_histogram(angles_non, 12.0, 0.0, 180.0);
    out.write_text("turning_angles_return.csv", histogram_csv(angle_ret_hist));
    out.write_text("turning_angles_nonreturn.csv", histogram_csv(angle_non_hist));

    // Saccade sizes.
    const SaccadeSizeStats sizes = saccade_size_stats(scanpaths, annotations);
    {
        std::string csv = "experiment,class,statistic,value,n\n";
        csv += stat_row("analysis", "return", "saccade_size_mean", sizes.returns);
        csv += stat_row("analysis", "to_be_revisited", "saccade_size_mean", sizes.to_be_revisited);
        csv += stat_row("analysis", "non_return", "saccade_size_mean", sizes.non_return);
        out.write_text("saccade_sizes.csv", csv);
        double max_size = 1.0;
        for (double s : sizes.pooled_sizes) max_size = std::max(max_size, s);
        out.write_text("saccade_size_hist.csv",
                       histogram_csv(make_histogram(sizes.pooled_sizes, 1.0, 0.0,
                                                    std::ceil(max_size))));
    }

    // Durations are optional in the data; skip with a notice when absent.
    bool have_durations = true;
    for (const Scanpath& sp : scanpaths)
        for (const Fixation& f : sp.fixations)
            if (!f.duration_ms) have_durations = false;
    if (have_durations) {
        const DurationStats durations = fixation_duration_stats(scanpaths, annotations);
        std::string csv = "experiment,class,statistic,value,n\n";
        csv += stat_row("analysis", "return", "duration_ms_mean", durations.returns);
        csv += stat_row("analysis", "to_be_revisited", "duration_ms_mean",
                        durations.to_be_revisited);
        csv += stat_row("analysis", "non_return", "duration_ms_mean", durations.non_return);
        out.write_text("durations.csv", csv);
    } else {
        log_info("analyze: fixation durations absent; skipping the duration report");
    }

    // Image extent: from the manifest when given, otherwise inferred.
    std::map<std::string, std::pair<double, double>> extent_by_trial;
    std::map<std::string, TrialManifest> manifest_by_trial;
    double inferred_w = 1.0, inferred_h = 1.0;
    for (const Scanpath& sp : scanpaths)
        for (const Fixation& f : sp.fixations) {
            inferred_w = std::max(inferred_w, std::ceil(f.x_dva));
            inferred_h = std::max(inferred_h, std::ceil(f.y_dva));
        }
    if (spec.manifest_path) {
        for (const TrialManifest& t : parse_manifest(*spec.manifest_path)) {
            extent_by_trial[t.trial_id] = {t.image_width_dva, t.image_height_dva};
            manifest_by_trial[t.trial_id] = t;
        }
    }
    auto extent_of = [&](const std::string& trial_id) {
        auto it = extent_by_trial.find(trial_id);
        return it != extent_by_trial.end() ? it->second : std::make_pair(inferred_w, inferred_h);
    };

    // Between-subject consistency entropy per image, with the chance level.
    {
        std::map<std::string, std::map<std::string, std::vector<Vec2>>> by_trial_subject;
        for (std::size_t i = 0; i < scanpaths.size(); ++i)
            for (std::size_t t = 0; t < scanpaths[i].size(); ++t)
                if (annotations[i].classes[t] == FixationClass::return_fixation)
                    by_trial_subject[scanpaths[i].trial_id][scanpaths[i].subject_id].push_back(
                        scanpaths[i].fixations[t].pos());
        // Subjects that produced no returns still count toward the
        // denominator, so collect the full roster per trial.
        std::map<std::string, std::set<std::string>> roster;
        for (const Scanpath& sp : scanpaths) roster[sp.trial_id].insert(sp.subject_id);

        RngStream chance_rng(spec.seed_override.value_or(1));
        std::string csv = "trial_id,entropy,chance_entropy,n_subjects,n_returns\n";
        for (const auto& [trial_id, subjects] : roster) {
            std::vector<std::vector<Vec2>> returns_by_subject;
            std::vector<std::size_t> counts;
            std::size_t total = 0;
            for (const std::string& subject : subjects) {
                auto trial_it = by_trial_subject.find(trial_id);
                std::vector<Vec2> pts;
                if (trial_it != by_trial_subject.end()) {
                    auto subj_it = trial_it->second.find(subject);
                    if (subj_it != trial_it->second.end()) pts = subj_it->second;
                }
                counts.push_back(pts.size());
                total += pts.size();
                returns_by_subject.push_back(std::move(pts));
            }
            const auto [w, h] = extent_of(trial_id);
            const std::optional<double> entropy = consistency_entropy(returns_by_subject, w, h);
            csv += trial_id + ",";
            if (entropy) {
                csv += format_double(*entropy) + "," +
                       format_double(chance_consistency_entropy(counts, w, h, chance_rng)) + ",";
            } else {
                csv += ",,";
            }
            csv += std::to_string(subjects.size()) + "," + std::to_string(total) + "\n";
        }
        out.write_text("consistency_entropy.csv", csv);
    }

    // Spatial bias: KLD between pooled return and non-return locations.
    {
        std::vector<Vec2> ret, non;
        for (std::size_t i = 0; i < scanpaths.size(); ++i)
            for (std::size_t t = 0; t < scanpaths[i].size(); ++t) {
                if (annotations[i].classes[t] == FixationClass::return_fixation)
                    ret.push_back(scanpaths[i].fixations[t].pos());
                else
                    non.push_back(scanpaths[i].fixations[t].pos());
            }
        const std::optional<double> kld = spatial_kld(ret, non, inferred_w, inferred_h);
        const std::optional<double> corr = angle_size_correlation(scanpaths);
        std::string csv = "statistic,value,n\n";
        csv += "spatial_kld," + optional_stat(kld) + "," + std::to_string(ret.size()) + "\n";
        csv += "angle_size_correlation," + optional_stat(corr) + "," +
               std::to_string(angles_ret.size() + angles_non.size()) + "\n";
        csv += "offset_zero_anomalies,";
        int anomalies = 0;
        for (const ReturnAnnotation& ann : annotations) anomalies += ann.offset_zero_anomalies;
        csv += std::to_string(anomalies) + ",\n";
        out.write_text("summary.csv", csv);
    }

    // Bottom-up saliency at fixations needs the images, hence the manifest.
    if (spec.manifest_path) {
        std::string csv = "trial_id,class,mean_saliency,n\n";
        std::map<std::string, std::vector<std::size_t>> by_trial;
        for (std::size_t i = 0; i < scanpaths.size(); ++i)
            by_trial[scanpaths[i].trial_id].push_back(i);
        for (const auto& [trial_id, indices] : by_trial) {
            auto mit = manifest_by_trial.find(trial_id);
            if (mit == manifest_by_trial.end()) continue;
            LoadedTrial trial = load_trial(mit->second);
            std::vector<Scanpath> sps;
            std::vector<ReturnAnnotation> anns;
            for (std::size_t i : indices) {
                sps.push_back(scanpaths[i]);
                anns.push_back(annotations[i]);
            }
            const SaliencyByClass sal = saliency_at_fixations(trial.search_image, sps, anns);
            auto row = [&](const char* cls, const std::optional<StatSummary>& s) {
                csv += trial_id + std::string(",") + cls + "," +
                       (s ? format_double(s->mean) : std::string()) + "," +
                       std::to_string(s ? s->n : 0) + "\n";
            };
            row("return", sal.returns);
            row("to_be_revisited", sal.to_be_revisited);
            row("non_return", sal.non_return);
        }
        out.write_text("saliency_at_fixations.csv", csv);
    } else {
        log_info("analyze: no manifest given; skipping saliency at fixations");
    }

    if (spec.figures) {
        out.write_text("return_offsets.svg",
                       svg_histogram(offset_hist.normalize(), "Return offsets",
                                     "offset (intervening fixations)", "probability"));
        out.write_text("turning_angles_return.svg",
                       svg_histogram(angle_ret_hist.normalize(), "Turning angles (returns)",
                                     "angle (deg)", "probability"));
        out.write_text("turning_angles_nonreturn.svg",
                       svg_histogram(angle_non_hist.normalize(), "Turning angles (non-returns)",
                                     "angle (deg)", "probability"));
        std::vector<std::string> labels;
        std::vector<double> means;
        auto bar = [&](const char* name, const std::optional<StatSummary>& s) {
            if (!s) return;
            labels.push_back(name);
            means.push_back(s->mean);
        };
        bar("return", sizes.returns);
        bar("to_be_revisited", sizes.to_be_revisited);
        bar("non_return", sizes.non_return);
        out.write_text("saccade_sizes.svg",
                       svg_bars(labels, means, "Saccade size by class", "mean size (dva)"));
    }

    out.commit();
    return 0;
}

int cmd_null(const RunSpec& spec) {
    const ModelConfig config = load_config(spec);
    const double threshold = spec.threshold_override_dva.value_or(config.return_threshold_dva);

    SaccadePrior prior = default_gamma_prior();
    int n_fixations = config.n_free_viewing_fixations;
    double width_dva = 32.0, height_dva = 24.0;
    if (!spec.dataset_paths.empty()) {
        const std::vector<Scanpath> reference = load_datasets(spec);
        prior = fit_saccade_prior(reference);
        double total = 0.0;
        for (const Scanpath& sp : reference) total += static_cast<double>(sp.size());
        n_fixations = std::max(1, static_cast<int>(std::lround(total / reference.size())));
    }
    if (spec.manifest_path) {
        const std::vector<TrialManifest> manifest = parse_manifest(*spec.manifest_path);
        if (!manifest.empty()) {
            width_dva = manifest.front().image_width_dva;
            height_dva = manifest.front().image_height_dva;
        }
    }

    std::vector<Scanpath> sequences(static_cast<std::size_t>(spec.count));
    parallel_trials(sequences.size(), spec.jobs, [&](std::size_t i) {
        char id[32];
        std::snprintf(id, sizeof(id), "null_%05zu", i);
        RngStream rng = trial_stream(config.seed, id);
        sequences[i] = run_null_model(prior, n_fixations, width_dva, height_dva, rng, id);
    });

    std::vector<double> proportions;
    proportions.reserve(sequences.size());
    for (const Scanpath& sp : sequences) {
        const ReturnAnnotation ann = detect_return_fixations(sp, threshold);
        proportions.push_back(static_cast<double>(ann.count(FixationClass::return_fixation)) /
                              static_cast<double>(sp.size()));
    }

    // Bootstrap percentile interval over the sequence proportions.
    RngStream boot(config.seed ^ 0x9E3779B97F4A7C15ull);
    std::vector<double> means;
    means.reserve(1000);
    for (int rep = 0; rep < 1000; ++rep) {
        double acc = 0.0;
        for (std::size_t k = 0; k < proportions.size(); ++k)
            acc += proportions[boot.uniform_index(proportions.size())];
        means.push_back(acc / static_cast<double>(proportions.size()));
    }
    std::sort(means.begin(), means.end());
    const double mean = summarize(proportions)->mean;
    const double lo = means[static_cast<std::size_t>(std::lround(0.025 * (means.size() - 1)))];
    const double hi = means[static_cast<std::size_t>(std::lround(0.975 * (means.size() - 1)))];

    OutputSession out(spec.out_dir, spec.force);
    out.write_text("null_scanpaths.csv", fixation_log_to_csv(sequences));
    std::string csv = "statistic,value\n";
    csv += "chance_return_proportion," + format_double(mean) + "\n";
    csv += "bootstrap_low," + format_double(lo) + "\n";
    csv += "bootstrap_high," + format_double(hi) + "\n";
    csv += "sequences," + std::to_string(sequences.size()) + "\n";
    csv += "fixations_per_sequence," + std::to_string(n_fixations) + "\n";
    out.write_text("null_summary.csv", csv);
    out.commit();
    return 0;
}

int cmd_ablate(const RunSpec& spec) {
    if (!spec.manifest_path) throw ConfigError("ablate needs --manifest");
    const ModelConfig base_config = load_config(spec);
    const std::vector<TrialManifest> manifest = parse_manifest(*spec.manifest_path);
    if (manifest.empty()) throw ConfigError("manifest has no trials");
    const std::vector<Scanpath> reference = load_datasets(spec);
    const SaccadePrior prior = fit_saccade_prior(reference);
    const FeatureBackend backend = FeatureBackend::builtin();
    const double threshold = spec.threshold_override_dva.value_or(base_config.return_threshold_dva);

    const AblationVariant variants[] = {
        AblationVariant::none, AblationVariant::no_similarity_saliency,
        AblationVariant::no_saccade_prior, AblationVariant::defective_memory,
        AblationVariant::infinite_ior};

    std::vector<LoadedTrial> trials(manifest.size());
    parallel_trials(manifest.size(), spec.jobs,
                    [&](std::size_t i) { trials[i] = load_trial(manifest[i]); });

    const ReferenceStats subject = dataset_stats(reference, threshold);

    OutputSession out(spec.out_dir, spec.force);
    std::string table = "variant,property,model_value,subject_value,similarity_index\n";
    for (AblationVariant variant : variants) {
        std::vector<Scanpath> scanpaths(manifest.size());
        parallel_trials(manifest.size(), spec.jobs, [&](std::size_t i) {
            ModelConfig cfg = config_for_trial(base_config, manifest[i]);
            cfg.ablation = variant;
            const ImageGrid* target = trials[i].target_image ? &*trials[i].target_image : nullptr;
            scanpaths[i] = run_scanpath(trials[i].search_image, target, cfg, backend, prior,
                                        manifest[i].trial_id)
                               .scanpath;
        });
        const std::string name = to_string(variant);
        out.write_text("scanpaths_" + name + ".csv", fixation_log_to_csv(scanpaths));

        const ReferenceStats model = dataset_stats(scanpaths, threshold);
        auto emit = [&](const char* property, std::optional<double> s, std::optional<double> m) {
            table += name + std::string(",") + property + "," + optional_stat(m) + "," +
                     optional_stat(s) + ",";
            if (s && m && *s + *m > 0.0) table += format_double(similarity_index(*s, *m));
            table += "\n";
        };
        emit("return_proportion", subject.return_proportion, model.return_proportion);
        emit("return_offset_mean", subject.mean_offset, model.mean_offset);
        emit("saccade_size_mean", subject.mean_saccade_size, model.mean_saccade_size);
        emit("turning_angle_return_mean", subject.mean_angle_return, model.mean_angle_return);
        emit("turning_angle_nonreturn_mean", subject.mean_angle_nonreturn,
             model.mean_angle_nonreturn);
    }
    out.write_text("si_table.csv", table);
    out.commit();
    return 0;
}

int cmd_features(const RunSpec& spec) {
    if (spec.image_path.empty()) throw ConfigError("features needs an image path");
    const FeatureLevel level = spec.feature_level == "target" ? FeatureLevel::target_level
                                                              : FeatureLevel::search_level;
    const ImageGrid image = load_image(spec.image_path);
    const FeatureTensor tensor = extract_features(image, FeatureBackend::builtin(), level);
    OutputSession out(spec.out_dir, spec.force);
    const std::string stem = fs::path(spec.image_path).stem().string();
    write_feature_tensor(out.path(stem + "_" + spec.feature_level + ".fmap"), tensor);
    out.commit();
    return 0;
}

} // namespace saccadelab
