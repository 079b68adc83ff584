#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "saccadelab/cli.hpp"
#include "saccadelab/errors.hpp"
#include "saccadelab/io.hpp"
#include "saccadelab/svg.hpp"
#include "test_util.hpp"

using namespace saccadelab;
namespace fs = std::filesystem;

namespace {

// Free-viewing manifest over one blob-texture image.
std::string write_free_viewing_setup(const std::string& tag, int n_c) {
    const std::string dir = testutil::temp_dir(tag);
    const ImageGrid img = testutil::blob_texture(42, 256, 256, 0.125);
    write_pgm(dir + "/scene.pgm", img);
    TrialManifest t;
    t.trial_id = "fv1";
    t.search_image_path = dir + "/scene.pgm";
    t.image_width_dva = 32.0;
    t.image_height_dva = 32.0;
    t.task = TaskMode::free_viewing;
    write_text_file(dir + "/manifest.txt", manifest_to_text({t}));
    ModelConfig cfg;
    cfg.mode = TaskMode::free_viewing;
    cfg.apply_mode_defaults();
    cfg.n_free_viewing_fixations = n_c;
    write_text_file(dir + "/config.txt", model_config_to_text(cfg));
    return dir;
}

// Search scene with a high-contrast diagonal decoy and a verbatim
// low-amplitude target, each exactly one grid cell wide: the model inspects
// the decoy first, rejects it, then finds the target — three fixations.
std::string write_search_setup(const std::string& tag) {
    const std::string dir = testutil::temp_dir(tag);
    ImageGrid scene = make_constant_image(256, 256, 1, 0.5f, 0.125);

    ImageGrid target = make_constant_image(8, 8, 1, 0.5f, 0.125);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) target.at(0, y, x) = (y / 2) % 2 ? 0.35f : 0.65f;
    ImageGrid decoy = make_constant_image(8, 8, 1, 0.5f, 0.125);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) decoy.at(0, y, x) = ((x + y) / 2) % 2 ? 0.0f : 1.0f;

    testutil::plant_patch(scene, decoy, 64, 64);    // cell (8, 8)
    testutil::plant_patch(scene, target, 176, 176); // cell (22, 22)
    write_pgm(dir + "/scene.pgm", scene);
    write_pgm(dir + "/target.pgm", target);

    TrialManifest t;
    t.trial_id = "vs1";
    t.search_image_path = dir + "/scene.pgm";
    t.target_image_path = dir + "/target.pgm";
    t.target_box_dva = RectDva{22.0, 22.0, 23.0, 23.0};
    t.image_width_dva = 32.0;
    t.image_height_dva = 32.0;
    t.task = TaskMode::visual_search;
    write_text_file(dir + "/manifest.txt", manifest_to_text({t}));

    ModelConfig cfg;
    cfg.mode = TaskMode::visual_search;
    cfg.apply_mode_defaults();
    cfg.recognition_threshold = 0.2; // rejects the decoy (0.28), accepts the verbatim plant (0.0)
    cfg.patch_dva = 1.0;
    write_text_file(dir + "/config.txt", model_config_to_text(cfg));
    return dir;
}

std::string slurp(const std::string& path) { return read_text_file(path); }

std::vector<Scanpath> experimental_log() {
    std::vector<Scanpath> logs;
    for (const char* subject : {"s1", "s2"}) {
        Scanpath sp;
        sp.subject_id = subject;
        sp.trial_id = "fv1";
        sp.source = ScanpathSource::experimental;
        const double xs[5] = {16.0, 20.0, 16.2, 8.0, 24.0};
        for (int i = 0; i < 5; ++i) {
            Fixation f;
            f.index = i;
            f.x_dva = xs[i];
            f.y_dva = 16.0;
            sp.fixations.push_back(f);
        }
        logs.push_back(std::move(sp));
    }
    return logs;
}

} // namespace

TEST_CASE("simulate writes one row per fixation") {
    const std::string dir = write_free_viewing_setup("cli_sim", 5);
    RunSpec spec;
    spec.manifest_path = dir + "/manifest.txt";
    spec.config_path = dir + "/config.txt";
    spec.out_dir = dir + "/out";
    CHECK(cmd_simulate(spec) == 0);
    const std::vector<Scanpath> parsed = parse_fixation_log(dir + "/out/scanpaths.csv");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].size() == 5);
    CHECK(parsed[0].source == ScanpathSource::model);
}

TEST_CASE("simulate is byte-identical across reruns") {
    const std::string dir = write_free_viewing_setup("cli_det", 7);
    RunSpec spec;
    spec.manifest_path = dir + "/manifest.txt";
    spec.config_path = dir + "/config.txt";
    spec.out_dir = dir + "/out1";
    CHECK(cmd_simulate(spec) == 0);
    spec.out_dir = dir + "/out2";
    spec.jobs = 2; // scheduling must not affect the bytes
    CHECK(cmd_simulate(spec) == 0);
    CHECK(slurp(dir + "/out1/scanpaths.csv") == slurp(dir + "/out2/scanpaths.csv"));
}

TEST_CASE("simulate refuses to overwrite without force") {
    const std::string dir = write_free_viewing_setup("cli_force", 3);
    RunSpec spec;
    spec.manifest_path = dir + "/manifest.txt";
    spec.config_path = dir + "/config.txt";
    spec.out_dir = dir + "/out";
    CHECK(cmd_simulate(spec) == 0);
    CHECK_THROWS_AS(cmd_simulate(spec), ConfigError);
    spec.force = true;
    CHECK(cmd_simulate(spec) == 0);
}

TEST_CASE("simulate aborts naming the failed trial and leaves no partial output") {
    const std::string dir = testutil::temp_dir("cli_fail");
    TrialManifest t;
    t.trial_id = "broken_trial";
    t.search_image_path = dir + "/missing.pgm";
    t.image_width_dva = 32.0;
    t.image_height_dva = 32.0;
    t.task = TaskMode::free_viewing;
    write_text_file(dir + "/manifest.txt", manifest_to_text({t}));
    RunSpec spec;
    spec.manifest_path = dir + "/manifest.txt";
    spec.out_dir = dir + "/out";
    try {
        cmd_simulate(spec);
        FAIL("expected a failure");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("broken_trial") != std::string::npos);
    }
    CHECK(!fs::exists(dir + "/out/scanpaths.csv"));
}

TEST_CASE("simulate dumps the static and per-step maps") {
    const std::string dir = write_search_setup("cli_maps");
    RunSpec spec;
    spec.manifest_path = dir + "/manifest.txt";
    spec.config_path = dir + "/config.txt";
    spec.out_dir = dir + "/out";
    spec.dump_maps = true;
    CHECK(cmd_simulate(spec) == 0);

    const std::vector<Scanpath> parsed = parse_fixation_log(dir + "/out/scanpaths.csv");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].stop_reason == StopReason::target_found);
    const std::size_t n = parsed[0].size();
    CHECK(n == 3); // decoy first, then the target

    std::size_t fmap_count = 0;
    for (const auto& entry : fs::directory_iterator(dir + "/out"))
        if (entry.path().extension() == ".fmap") ++fmap_count;
    CHECK(fmap_count == 4 + 3 * (n - 1)); // 4 static maps + 3 per update step
}

TEST_CASE("analyze emits the metric reports") {
    const std::string dir = testutil::temp_dir("cli_analyze");
    // Single A-B-A trial.
    Scanpath sp;
    sp.subject_id = "s1";
    sp.trial_id = "t1";
    sp.source = ScanpathSource::experimental;
    const double xs[3] = {4.0, 9.0, 4.1};
    for (int i = 0; i < 3; ++i) {
        Fixation f;
        f.index = i;
        f.x_dva = xs[i];
        f.y_dva = 5.0;
        sp.fixations.push_back(f);
    }
    write_fixation_log(dir + "/log.csv", {sp});

    RunSpec spec;
    spec.dataset_paths = {dir + "/log.csv"};
    spec.out_dir = dir + "/out";
    CHECK(cmd_analyze(spec) == 0);

    SUBCASE("offsets concentrate at 1 for A-B-A") {
        const std::string csv = slurp(dir + "/out/return_offsets.csv");
        CHECK(csv.find("1,2,1") != std::string::npos); // bin [1,2) holds all mass
    }
    SUBCASE("durations are skipped without error") {
        CHECK(!fs::exists(dir + "/out/durations.csv"));
    }
    SUBCASE("proportion and summary reports exist") {
        CHECK(fs::exists(dir + "/out/proportion_returns.csv"));
        CHECK(fs::exists(dir + "/out/summary.csv"));
        CHECK(fs::exists(dir + "/out/consistency_entropy.csv"));
    }
}

TEST_CASE("analyze entropy is unchanged by duplicating a subject") {
    const std::string dir = testutil::temp_dir("cli_entropy");
    std::vector<Scanpath> one = {experimental_log()[0]};
    std::vector<Scanpath> two = experimental_log();
    write_fixation_log(dir + "/one.csv", one);
    write_fixation_log(dir + "/two.csv", two);

    RunSpec spec;
    spec.dataset_paths = {dir + "/one.csv"};
    spec.out_dir = dir + "/out1";
    CHECK(cmd_analyze(spec) == 0);
    spec.dataset_paths = {dir + "/two.csv"};
    spec.out_dir = dir + "/out2";
    CHECK(cmd_analyze(spec) == 0);

    auto entropy_of = [](const std::string& path) {
        const std::string csv = slurp(path);
        const std::size_t nl = csv.find('\n');
        const std::size_t comma = csv.find(',', nl + 1);
        const std::size_t comma2 = csv.find(',', comma + 1);
        return csv.substr(comma + 1, comma2 - comma - 1);
    };
    CHECK(entropy_of(dir + "/out1/consistency_entropy.csv") ==
          entropy_of(dir + "/out2/consistency_entropy.csv"));
}

TEST_CASE("analyze figures are deterministic") {
    const std::string dir = testutil::temp_dir("cli_svg");
    write_fixation_log(dir + "/log.csv", experimental_log());
    RunSpec spec;
    spec.dataset_paths = {dir + "/log.csv"};
    spec.figures = true;
    spec.out_dir = dir + "/out1";
    CHECK(cmd_analyze(spec) == 0);
    spec.out_dir = dir + "/out2";
    CHECK(cmd_analyze(spec) == 0);
    CHECK(slurp(dir + "/out1/return_offsets.svg") == slurp(dir + "/out2/return_offsets.svg"));
    CHECK(slurp(dir + "/out1/turning_angles_return.svg") ==
          slurp(dir + "/out2/turning_angles_return.svg"));
}

TEST_CASE("null command generates the requested count") {
    const std::string dir = testutil::temp_dir("cli_null");
    RunSpec spec;
    spec.out_dir = dir + "/out";
    spec.count = 100;
    spec.seed_override = 7;
    CHECK(cmd_null(spec) == 0);
    const std::vector<Scanpath> parsed = parse_fixation_log(dir + "/out/null_scanpaths.csv");
    CHECK(parsed.size() == 100);
    for (const Scanpath& sp : parsed) CHECK(sp.source == ScanpathSource::null_model);
    const std::string summary = slurp(dir + "/out/null_summary.csv");
    CHECK(summary.find("chance_return_proportion") != std::string::npos);
    CHECK(summary.find("bootstrap_low") != std::string::npos);
}

TEST_CASE("ablate emits the similarity index table") {
    const std::string dir = write_free_viewing_setup("cli_ablate", 8);
    write_fixation_log(dir + "/reference.csv", experimental_log());
    RunSpec spec;
    spec.manifest_path = dir + "/manifest.txt";
    spec.config_path = dir + "/config.txt";
    spec.dataset_paths = {dir + "/reference.csv"};
    spec.out_dir = dir + "/out1";
    spec.seed_override = 11;
    CHECK(cmd_ablate(spec) == 0);

    const std::string table = slurp(dir + "/out1/si_table.csv");
    CHECK(table.find("infinite_ior,return_proportion,0,") != std::string::npos);
    CHECK(fs::exists(dir + "/out1/scanpaths_none.csv"));
    CHECK(fs::exists(dir + "/out1/scanpaths_defective_memory.csv"));

    SUBCASE("reproducible under a fixed seed") {
        spec.out_dir = dir + "/out2";
        CHECK(cmd_ablate(spec) == 0);
        CHECK(slurp(dir + "/out1/si_table.csv") == slurp(dir + "/out2/si_table.csv"));
    }
}

TEST_CASE("features command exports an FMAP tensor") {
    const std::string dir = testutil::temp_dir("cli_features");
    write_pgm(dir + "/img.pgm", testutil::blob_texture(7, 64, 64, 1.0));
    RunSpec spec;
    spec.image_path = dir + "/img.pgm";
    spec.out_dir = dir + "/out";
    CHECK(cmd_features(spec) == 0);
    const FeatureTensor t = read_feature_tensor(dir + "/out/img_search.fmap");
    CHECK(t.channels == 10);
    CHECK(t.height == 8);
    CHECK(t.width == 8);
}

TEST_CASE("svg renderer is stable for the same histogram") {
    Histogram h;
    h.bin_edges = {0.0, 1.0, 2.0, 3.0};
    h.values = {1.0, 5.0, 2.0};
    const std::string a = svg_histogram(h, "check", "x", "y");
    const std::string b = svg_histogram(h, "check", "x", "y");
    CHECK(a == b);
    CHECK(a.find("<svg") != std::string::npos);
    CHECK(a.find("</svg>") != std::string::npos);
}
