#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace saccadelab {

/// Everything one batch command needs. Output files are only overwritten
/// under force; a failed command removes whatever it had already written.
struct RunSpec {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::string> manifest_path;
    std::vector<std::string> dataset_paths;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<double> threshold_override_dva;
    int count = 1000;  // null sequences (the reference analysis uses 25000)
    int jobs = 1;
    bool force = false;
    bool dump_maps = false;
    bool figures = false;

    // `features` command inputs
    std::string image_path;
    std::string feature_level = "search";
};

int cmd_simulate(const RunSpec& spec);
int cmd_analyze(const RunSpec& spec);
int cmd_null(const RunSpec& spec);
int cmd_ablate(const RunSpec& spec);
int cmd_features(const RunSpec& spec);

} // namespace saccadelab
