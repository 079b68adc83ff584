#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "saccadelab/cli.hpp"
#include "saccadelab/log.hpp"

using saccadelab::RunSpec;

namespace {

void add_common_flags(CLI::App* cmd, RunSpec& spec, std::string& config, std::string& manifest,
                      long long& seed, double& threshold) {
    cmd->add_option("--config", config, "model config file (key = value lines)");
    cmd->add_option("--manifest", manifest, "trial manifest file");
    cmd->add_option("--out", spec.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", seed, "seed override");
    cmd->add_option("--jobs", spec.jobs, "parallel trial workers")->capture_default_str();
    cmd->add_option("--threshold-dva", threshold, "return threshold override in dva");
    cmd->add_option("--count", spec.count, "null sequence count")->capture_default_str();
    cmd->add_flag("--force", spec.force, "overwrite existing outputs");
    cmd->add_flag("--dump-maps", spec.dump_maps, "write per-fixation attention maps as FMAP");
    cmd->add_flag("--figures", spec.figures, "emit SVG histograms");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"saccade-lab: scanpath simulation and return-fixation analysis"};
    app.require_subcommand(1);

    RunSpec spec;
    std::string config_path, manifest_path;
    long long seed = -1;
    double threshold = -1.0;
    std::vector<std::string> datasets;

    CLI::App* simulate = app.add_subcommand("simulate", "generate model scanpaths over a manifest");
    simulate->add_option("datasets", datasets, "fixation logs used to fit the saccade prior");
    add_common_flags(simulate, spec, config_path, manifest_path, seed, threshold);

    CLI::App* analyze = app.add_subcommand("analyze", "return-fixation metrics over fixation logs");
    analyze->add_option("datasets", datasets, "fixation logs to analyze")->required();
    add_common_flags(analyze, spec, config_path, manifest_path, seed, threshold);

    CLI::App* null_cmd = app.add_subcommand("null", "memoryless random-walk baseline");
    null_cmd->add_option("datasets", datasets, "reference logs for the prior and length");
    add_common_flags(null_cmd, spec, config_path, manifest_path, seed, threshold);

    CLI::App* ablate = app.add_subcommand("ablate", "run ablated model variants and the SI table");
    ablate->add_option("datasets", datasets, "reference fixation logs")->required();
    add_common_flags(ablate, spec, config_path, manifest_path, seed, threshold);

    CLI::App* features = app.add_subcommand("features", "export builtin features as FMAP");
    features->add_option("image", spec.image_path, "input raster image")->required();
    features->add_option("--level", spec.feature_level, "search or target")
        ->capture_default_str();
    add_common_flags(features, spec, config_path, manifest_path, seed, threshold);

    CLI11_PARSE(app, argc, argv);

    spec.dataset_paths = datasets;
    if (!config_path.empty()) spec.config_path = config_path;
    if (!manifest_path.empty()) spec.manifest_path = manifest_path;
    if (seed >= 0) spec.seed_override = static_cast<std::uint64_t>(seed);
    if (threshold > 0.0) spec.threshold_override_dva = threshold;

    try {
        if (simulate->parsed()) {
            spec.command = "simulate";
            return saccadelab::cmd_simulate(spec);
        }
        if (analyze->parsed()) {
            spec.command = "analyze";
            return saccadelab::cmd_analyze(spec);
        }
        if (null_cmd->parsed()) {
            spec.command = "null";
            return saccadelab::cmd_null(spec);
        }
        if (ablate->parsed()) {
            spec.command = "ablate";
            return saccadelab::cmd_ablate(spec);
        }
        if (features->parsed()) {
            spec.command = "features";
            return saccadelab::cmd_features(spec);
        }
    } catch (const std::exception& e) {
        saccadelab::log_error(e.what());
        return 1;
    }
    return 0;
}
