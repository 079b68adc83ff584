#include <doctest.h>

#include <cmath>

#include "saccadelab/errors.hpp"
#include "saccadelab/metrics.hpp"
#include "test_util.hpp"

using namespace saccadelab;

namespace {

Scanpath path_from(const std::vector<Vec2>& points, const std::string& subject = "s1",
                   const std::string& trial = "t1") {
    Scanpath sp;
    sp.subject_id = subject;
    sp.trial_id = trial;
    sp.source = ScanpathSource::experimental;
    for (std::size_t i = 0; i < points.size(); ++i) {
        Fixation f;
        f.index = static_cast<int>(i);
        f.x_dva = points[i].x;
        f.y_dva = points[i].y;
        sp.fixations.push_back(f);
    }
    return sp;
}

// Eight fixations with overlaps 3<->6 and 5<->7 (1-based numbering):
// returns {6,7}, to-be-revisited {3,5}, non-return {1,2,4,8}.
Scanpath figure_pattern() {
    return path_from({{0.0, 0.0},
                      {5.0, 0.0},
                      {10.0, 0.0},
                      {5.0, 5.0},
                      {10.0, 5.0},
                      {10.0, 0.5},
                      {10.0, 5.5},
                      {0.0, 5.0}});
}

} // namespace

TEST_CASE("return detection") {
    SUBCASE("A-B-A' classifies as expected") {
        const Scanpath sp = path_from({{0.0, 0.0}, {5.0, 0.0}, {0.5, 0.0}});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        CHECK(ann.classes[0] == FixationClass::to_be_revisited);
        CHECK(ann.classes[1] == FixationClass::non_return);
        CHECK(ann.classes[2] == FixationClass::return_fixation);
        CHECK(*ann.matched_index[2] == 0);
        CHECK(ann.revisit_count[0] == 1);
    }
    SUBCASE("the eight-fixation reference pattern") {
        const ReturnAnnotation ann = detect_return_fixations(figure_pattern(), 1.0);
        CHECK(ann.classes[5] == FixationClass::return_fixation); // 6 (1-based)
        CHECK(ann.classes[6] == FixationClass::return_fixation); // 7
        CHECK(ann.classes[2] == FixationClass::to_be_revisited); // 3
        CHECK(ann.classes[4] == FixationClass::to_be_revisited); // 5
        for (int idx : {0, 1, 3, 7}) CHECK(ann.classes[static_cast<std::size_t>(idx)] ==
                                           FixationClass::non_return);
        CHECK(*ann.matched_index[5] == 2);
        CHECK(*ann.matched_index[6] == 4);
    }
    SUBCASE("mutually distant fixations yield no returns") {
        const Scanpath sp = path_from({{0.0, 0.0}, {5.0, 0.0}, {10.0, 0.0}, {15.0, 0.0}});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        CHECK(ann.count(FixationClass::return_fixation) == 0);
        CHECK(ann.count(FixationClass::non_return) == 4);
    }
    SUBCASE("monotone in the threshold") {
        testutil::noise_image(0, 1, 1); // keep seeds distinct from other cases
        RngStream rng(404);
        std::vector<Vec2> pts;
        for (int i = 0; i < 40; ++i) pts.push_back({rng.uniform(0.0, 20.0), rng.uniform(0.0, 20.0)});
        const Scanpath sp = path_from(pts);
        int prev = 0;
        for (double threshold : {1.0, 2.0, 3.0, 4.0}) {
            const ReturnAnnotation ann = detect_return_fixations(sp, threshold);
            const int count = ann.count(FixationClass::return_fixation);
            CHECK(count >= prev);
            prev = count;
        }
    }
    SUBCASE("partition covers every fixation") {
        RngStream rng(405);
        std::vector<Vec2> pts;
        for (int i = 0; i < 60; ++i) pts.push_back({rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)});
        const Scanpath sp = path_from(pts);
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.5);
        CHECK(ann.count(FixationClass::return_fixation) + ann.count(FixationClass::to_be_revisited) +
                  ann.count(FixationClass::non_return) ==
              60);
    }
    SUBCASE("empty scanpath gives an empty annotation") {
        const Scanpath sp = path_from({});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        CHECK(ann.size() == 0);
    }
    SUBCASE("dual-role fixation stays a return") {
        // Chain: A, B within 1 of A, C within 1 of B but not A.
        const Scanpath sp = path_from({{0.0, 0.0}, {0.9, 0.0}, {1.8, 0.0}});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        CHECK(ann.classes[1] == FixationClass::return_fixation);
        CHECK(ann.classes[2] == FixationClass::return_fixation);
        CHECK(*ann.matched_index[2] == 1);
        CHECK(ann.revisit_count[1] == 1);
    }
}

TEST_CASE("proportion of returns") {
    SUBCASE("two returns in ten fixations") {
        std::vector<Vec2> pts;
        for (int i = 0; i < 8; ++i) pts.push_back({3.0 * i, 0.0});
        pts.push_back({0.1, 0.0});  // return to fixation 0
        pts.push_back({3.1, 0.0});  // return to fixation 1
        const ProportionResult r = proportion_return({path_from(pts)}, 1.0);
        CHECK(r.per_trial[0] == doctest::Approx(0.2));
    }
    SUBCASE("the reference pattern scores 2/8") {
        const ProportionResult r = proportion_return({figure_pattern()}, 1.0);
        CHECK(r.per_trial[0] == doctest::Approx(0.25));
    }
    SUBCASE("first six fixations keep only the first return") {
        ProportionOptions options;
        options.first_k = 6;
        const ProportionResult r = proportion_return({figure_pattern()}, 1.0, options);
        CHECK(r.per_trial[0] == doctest::Approx(1.0 / 6.0));
    }
    SUBCASE("twice-revisited proportion") {
        // L1-L2-L1-L3-L4-L1: the first fixation is revisited twice.
        const Scanpath sp = path_from(
            {{0.0, 0.0}, {5.0, 0.0}, {0.2, 0.0}, {5.0, 5.0}, {10.0, 0.0}, {0.4, 0.0}});
        ProportionOptions options;
        options.twice_only = true;
        const ProportionResult r = proportion_return({sp}, 1.0, options);
        CHECK(r.per_trial[0] == doctest::Approx(1.0 / 6.0));
    }
    SUBCASE("short trials score zero") {
        const ProportionResult r = proportion_return({path_from({{1.0, 1.0}})}, 1.0);
        CHECK(r.per_trial[0] == 0.0);
    }
    SUBCASE("subject means average per-subject trials") {
        const Scanpath a = path_from({{0.0, 0.0}, {5.0, 0.0}, {0.1, 0.0}}, "s1", "t1"); // 1/3
        const Scanpath b = path_from({{0.0, 0.0}, {5.0, 0.0}, {10.0, 0.0}}, "s2", "t1"); // 0
        const ProportionResult r = proportion_return({a, b}, 1.0);
        CHECK(r.per_subject_mean.at("s1") == doctest::Approx(1.0 / 3.0));
        CHECK(r.per_subject_mean.at("s2") == 0.0);
        CHECK(r.subject_mean == doctest::Approx(1.0 / 6.0));
    }
}

TEST_CASE("return offsets") {
    SUBCASE("reference pattern offset 3 -> 6 is 2") {
        const ReturnAnnotation ann = detect_return_fixations(figure_pattern(), 1.0);
        const std::vector<int> offsets = return_offsets(ann);
        REQUIRE(offsets.size() == 2);
        CHECK(offsets[0] == 2); // return 6 matched to 3
        CHECK(offsets[1] == 1); // return 7 matched to 5
    }
    SUBCASE("A-B-A has offset 1") {
        const Scanpath sp = path_from({{0.0, 0.0}, {5.0, 0.0}, {0.0, 0.0}});
        const std::vector<int> offsets =
            return_offsets(detect_return_fixations(sp, 1.0));
        REQUIRE(offsets.size() == 1);
        CHECK(offsets[0] == 1);
    }
    SUBCASE("A-B-C-D-A has offset 3") {
        const Scanpath sp =
            path_from({{0.0, 0.0}, {5.0, 0.0}, {10.0, 0.0}, {5.0, 5.0}, {0.0, 0.0}});
        const std::vector<int> offsets =
            return_offsets(detect_return_fixations(sp, 1.0));
        REQUIRE(offsets.size() == 1);
        CHECK(offsets[0] == 3);
    }
    SUBCASE("consecutive overlap is flagged as an offset-zero anomaly") {
        const Scanpath sp = path_from({{0.0, 0.0}, {0.5, 0.0}, {5.0, 0.0}});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        CHECK(ann.offset_zero_anomalies == 1);
        const std::vector<int> offsets = return_offsets(ann);
        REQUIRE(offsets.size() == 1);
        CHECK(offsets[0] == 0);
    }
}

TEST_CASE("turning angles") {
    SUBCASE("collinear forward motion is 0 degrees") {
        const Scanpath sp = path_from({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
        const auto samples = turning_angle_samples(sp, detect_return_fixations(sp, 0.5));
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].first == doctest::Approx(0.0));
    }
    SUBCASE("exact reversal is 180 degrees") {
        const Scanpath sp = path_from({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}});
        const auto samples = turning_angle_samples(sp, detect_return_fixations(sp, 0.5));
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].first == doctest::Approx(180.0));
        CHECK(samples[0].second); // the closing fixation is a return
    }
    SUBCASE("right angle turn is 90 degrees") {
        const Scanpath sp = path_from({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
        const auto samples = turning_angle_samples(sp, detect_return_fixations(sp, 0.5));
        REQUIRE(samples.size() == 1);
        CHECK(samples[0].first == doctest::Approx(90.0));
    }
    SUBCASE("reversal magnitude does not depend on saccade length") {
        for (double len : {0.5, 2.0, 11.0}) {
            const Scanpath sp = path_from({{0.0, 0.0}, {len, 0.0}, {0.0, 0.0}});
            const auto samples = turning_angle_samples(sp, detect_return_fixations(sp, 0.1));
            REQUIRE(samples.size() == 1);
            CHECK(samples[0].first == doctest::Approx(180.0));
        }
    }
    SUBCASE("zero-length saccades are skipped") {
        const Scanpath sp = path_from({{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}});
        const auto samples = turning_angle_samples(sp, detect_return_fixations(sp, 0.5));
        CHECK(samples.size() == 1); // only the last full triple
    }
    SUBCASE("12 degree bins place 180 in the last bin") {
        const Scanpath sp = path_from({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}});
        const auto [ret, non] = turning_angles(sp, detect_return_fixations(sp, 0.5));
        CHECK(ret.values.size() == 15);
        CHECK(ret.values.back() == 1.0);
    }
}

TEST_CASE("saccade sizes") {
    SUBCASE("3-4-5 triangle") {
        const Scanpath sp = path_from({{0.0, 0.0}, {3.0, 4.0}});
        const SaccadeSizeStats stats =
            saccade_size_stats(sp, detect_return_fixations(sp, 0.5));
        REQUIRE(stats.pooled_sizes.size() == 1);
        CHECK(stats.pooled_sizes[0] == doctest::Approx(5.0));
    }
    SUBCASE("single-class sequences pool their own stats") {
        const Scanpath sp = path_from({{0.0, 0.0}, {3.0, 0.0}, {7.0, 0.0}, {12.0, 0.0}});
        const SaccadeSizeStats stats =
            saccade_size_stats(sp, detect_return_fixations(sp, 0.5));
        REQUIRE(stats.non_return.has_value());
        CHECK(stats.non_return->n == 3);
        CHECK(stats.non_return->mean ==
              doctest::Approx((3.0 + 4.0 + 5.0) / 3.0));
        CHECK(!stats.returns.has_value());
    }
    SUBCASE("class means match a scalar oracle") {
        const Scanpath sp = path_from({{0.0, 0.0}, {4.0, 0.0}, {8.0, 0.0}, {4.2, 0.0}});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        const SaccadeSizeStats stats = saccade_size_stats(sp, ann);
        REQUIRE(stats.returns.has_value());
        CHECK(stats.returns->mean == doctest::Approx(3.8)); // |8.0 -> 4.2|
        REQUIRE(stats.non_return.has_value());
        CHECK(stats.non_return->mean == doctest::Approx(4.0)); // |4.0 -> 8.0|
        REQUIRE(stats.to_be_revisited.has_value());
        CHECK(stats.to_be_revisited->mean == doctest::Approx(4.0)); // |0.0 -> 4.0|
    }
}

TEST_CASE("fixation durations") {
    auto with_durations = [](std::vector<Vec2> pts, std::vector<double> durations) {
        Scanpath sp = path_from(pts);
        for (std::size_t i = 0; i < durations.size(); ++i)
            sp.fixations[i].duration_ms = durations[i];
        return sp;
    };
    SUBCASE("constant durations give constant means") {
        const Scanpath sp =
            with_durations({{0.0, 0.0}, {5.0, 0.0}, {0.1, 0.0}}, {250.0, 250.0, 250.0});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        const DurationStats stats = fixation_duration_stats({sp}, {ann});
        CHECK(stats.returns->mean == doctest::Approx(250.0));
        CHECK(stats.to_be_revisited->mean == doctest::Approx(250.0));
        CHECK(stats.non_return->mean == doctest::Approx(250.0));
    }
    SUBCASE("two-class synthetic means match the oracle") {
        const Scanpath sp =
            with_durations({{0.0, 0.0}, {5.0, 0.0}, {0.1, 0.0}}, {200.0, 300.0, 400.0});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        const DurationStats stats = fixation_duration_stats({sp}, {ann});
        CHECK(stats.returns->mean == doctest::Approx(400.0));
        CHECK(stats.to_be_revisited->mean == doctest::Approx(200.0));
        CHECK(stats.non_return->mean == doctest::Approx(300.0));
    }
    SUBCASE("empty class reports absent, not zero") {
        const Scanpath sp = with_durations({{0.0, 0.0}, {5.0, 0.0}}, {200.0, 300.0});
        const DurationStats stats =
            fixation_duration_stats({sp}, {detect_return_fixations(sp, 1.0)});
        CHECK(!stats.returns.has_value());
        CHECK(stats.non_return.has_value());
    }
    SUBCASE("missing durations raise") {
        const Scanpath sp = path_from({{0.0, 0.0}, {5.0, 0.0}});
        CHECK_THROWS_AS(fixation_duration_stats({sp}, {detect_return_fixations(sp, 1.0)}),
                        UnsupportedDataError);
    }
    SUBCASE("target split partitions by the on_target flag") {
        Scanpath sp = with_durations({{0.0, 0.0}, {5.0, 0.0}, {9.0, 0.0}, {13.0, 0.0}},
                                     {200.0, 300.0, 240.0, 500.0});
        sp.fixations[0].on_target = false;
        sp.fixations[1].on_target = true;
        sp.fixations[2].on_target = false;
        sp.fixations[3].on_target = true;
        const DurationStats stats =
            fixation_duration_stats({sp}, {detect_return_fixations(sp, 1.0)}, true);
        REQUIRE(stats.has_target_split);
        const int non = static_cast<int>(FixationClass::non_return);
        REQUIRE(stats.split[non][1].has_value());
        CHECK(stats.split[non][1]->mean == doctest::Approx(400.0)); // 300 and 500
        REQUIRE(stats.split[non][0].has_value());
        CHECK(stats.split[non][0]->mean == doctest::Approx(220.0)); // 200 and 240
    }
}

TEST_CASE("consistency entropy") {
    EntropyOptions plain;
    plain.blur_sigma_cells = 0.0;

    SUBCASE("all mass in one cell is near-zero entropy") {
        const std::vector<std::vector<Vec2>> returns = {{{1.0, 1.0}}, {{1.1, 1.1}}};
        const std::optional<double> h = consistency_entropy(returns, 40.0, 32.0, plain);
        REQUIRE(h.has_value());
        // The 1e-10 floor on the 1279 empty cells contributes ~2.9e-6 nats;
        // beyond that the delta distribution carries no entropy.
        const double floor_term = 1279.0 * (1e-10 / (1.0 + 1279e-10)) *
                                  -std::log(1e-10 / (1.0 + 1279e-10));
        CHECK(*h - floor_term < 1e-6);
        CHECK(*h < 1e-4);
    }
    SUBCASE("uniform occupancy reaches ln(1280)") {
        std::vector<std::vector<Vec2>> returns(1);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 40; ++c)
                returns[0].push_back({(c + 0.5) * 1.0, (r + 0.5) * 1.0});
        const std::optional<double> h =
            consistency_entropy(returns, 40.0, 32.0, plain);
        REQUIRE(h.has_value());
        CHECK(*h == doctest::Approx(std::log(1280.0)).epsilon(1e-6));
        CHECK(std::log(1280.0) == doctest::Approx(7.15462).epsilon(1e-4));
    }
    SUBCASE("uniform occupancy survives the blur") {
        EntropyOptions blurred; // default sigma = 1 cell
        std::vector<std::vector<Vec2>> returns(1);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 40; ++c)
                returns[0].push_back({(c + 0.5) * 1.0, (r + 0.5) * 1.0});
        const std::optional<double> h = consistency_entropy(returns, 40.0, 32.0, blurred);
        REQUIRE(h.has_value());
        CHECK(*h == doctest::Approx(std::log(1280.0)).epsilon(1e-6));
    }
    SUBCASE("chance baseline exceeds the single-cell entropy") {
        const std::vector<std::vector<Vec2>> returns = {{{1.0, 1.0}}, {{1.1, 1.1}}};
        const double h = *consistency_entropy(returns, 40.0, 32.0, plain);
        RngStream rng(2718);
        const double chance = chance_consistency_entropy({1, 1}, 40.0, 32.0, rng, 100, plain);
        CHECK(chance > h);
    }
    SUBCASE("no returns is absent") {
        CHECK(!consistency_entropy({{}, {}}, 40.0, 32.0, plain).has_value());
    }
    SUBCASE("bounded by ln(1280) after flooring") {
        RngStream rng(31415);
        std::vector<std::vector<Vec2>> returns(5);
        for (auto& subj : returns)
            for (int i = 0; i < 20; ++i)
                subj.push_back({rng.uniform(0.0, 40.0), rng.uniform(0.0, 32.0)});
        const double h = *consistency_entropy(returns, 40.0, 32.0);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(1280.0) + 1e-9);
    }
}

TEST_CASE("spatial KLD") {
    SUBCASE("identical point sets diverge by zero") {
        std::vector<Vec2> pts;
        RngStream rng(99);
        for (int i = 0; i < 50; ++i) pts.push_back({rng.uniform(0.0, 20.0), rng.uniform(0.0, 20.0)});
        const std::optional<double> kld = spatial_kld(pts, pts, 20.0, 20.0);
        REQUIRE(kld.has_value());
        CHECK(std::fabs(*kld) < 1e-9);
    }
    SUBCASE("non-negative for arbitrary sets") {
        RngStream rng(123);
        std::vector<Vec2> a, b;
        for (int i = 0; i < 30; ++i) {
            a.push_back({rng.uniform(0.0, 20.0), rng.uniform(0.0, 20.0)});
            b.push_back({rng.uniform(0.0, 20.0), rng.uniform(0.0, 20.0)});
        }
        CHECK(*spatial_kld(a, b, 20.0, 20.0) >= 0.0);
    }
    SUBCASE("two-cell closed form") {
        const double kld = kld_of_distributions({0.9, 0.1}, {0.5, 0.5});
        CHECK(kld == doctest::Approx(0.9 * std::log(1.8) + 0.1 * std::log(0.2)).epsilon(1e-9));
        CHECK(kld == doctest::Approx(0.3681).epsilon(1e-3));
    }
    SUBCASE("empty sets are absent") {
        CHECK(!spatial_kld({}, {{1.0, 1.0}}, 10.0, 10.0).has_value());
    }
}

TEST_CASE("similarity index") {
    CHECK(similarity_index(0.3, 0.3) == doctest::Approx(1.0));
    CHECK(similarity_index(0.2, 0.1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(similarity_index(0.7, 0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(similarity_index(0.0, 0.0), std::domain_error);
    SUBCASE("swap symmetry: SI(s,m) + SI(m,s) = 2") {
        RngStream rng(55);
        for (int i = 0; i < 20; ++i) {
            const double s = rng.uniform(0.01, 5.0), m = rng.uniform(0.01, 5.0);
            CHECK(similarity_index(s, m) + similarity_index(m, s) ==
                  doctest::Approx(2.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("saliency at fixations") {
    SUBCASE("flat image: every class shares the uniform mean") {
        const ImageGrid img = make_constant_image(128, 128, 1, 0.5f, 0.25);
        const Scanpath sp = path_from({{8.0, 8.0}, {24.0, 8.0}, {8.2, 8.0}});
        const ReturnAnnotation ann = detect_return_fixations(sp, 1.0);
        const SaliencyByClass s = saliency_at_fixations(img, {sp}, {ann});
        const double uniform = 1.0 / (16.0 * 16.0);
        CHECK(s.returns->mean == doctest::Approx(uniform).epsilon(1e-6));
        CHECK(s.non_return->mean == doctest::Approx(uniform).epsilon(1e-6));
        CHECK(s.to_be_revisited->mean == doctest::Approx(uniform).epsilon(1e-6));
    }
    SUBCASE("fixations on the salient peak outscore a flat region") {
        ImageGrid img = make_constant_image(256, 256, 1, 0.5f, 0.125);
        const ImageGrid blob = testutil::checkerboard(32, 4, 0.0f, 1.0f, 0.125);
        testutil::plant_patch(img, blob, 112, 112); // center (16,16) dva
        const Scanpath on_peak = path_from({{16.0, 16.0}, {17.0, 16.0}});
        const Scanpath off_peak = path_from({{4.0, 4.0}, {5.0, 4.0}});
        const SaliencyByClass a =
            saliency_at_fixations(img, {on_peak}, {detect_return_fixations(on_peak, 0.5)});
        const SaliencyByClass b =
            saliency_at_fixations(img, {off_peak}, {detect_return_fixations(off_peak, 0.5)});
        CHECK(a.non_return->mean > b.non_return->mean);
    }
}

TEST_CASE("recognition error rates") {
    std::map<std::string, RectDva> boxes;
    boxes["t1"] = {10.0, 10.0, 12.0, 12.0};

    SUBCASE("stopping on the target means no false positives") {
        Scanpath sp = path_from({{0.0, 0.0}, {5.0, 5.0}, {11.0, 11.0}});
        sp.stop_reason = StopReason::target_found;
        const RecognitionErrorRates rates = recognition_error_rates({sp}, boxes);
        REQUIRE(rates.false_positive_rate.has_value());
        CHECK(*rates.false_positive_rate == 0.0);
        CHECK(*rates.false_negative_rate == 0.0);
    }
    SUBCASE("passing through the box twice counts two false negatives") {
        Scanpath sp = path_from(
            {{0.0, 0.0}, {11.0, 11.0}, {5.0, 5.0}, {11.5, 11.5}, {3.0, 3.0}, {11.0, 11.5}});
        sp.stop_reason = StopReason::target_found;
        const RecognitionErrorRates rates = recognition_error_rates({sp}, boxes);
        CHECK(*rates.false_negative_rate == doctest::Approx(2.0 / 6.0));
        CHECK(*rates.false_positive_rate == 0.0);
    }
    SUBCASE("a stop outside the box is a false positive") {
        Scanpath sp = path_from({{0.0, 0.0}, {5.0, 5.0}});
        sp.stop_reason = StopReason::target_found;
        const RecognitionErrorRates rates = recognition_error_rates({sp}, boxes);
        CHECK(*rates.false_positive_rate == 1.0);
    }
    SUBCASE("no trials reports absent rates") {
        const RecognitionErrorRates rates = recognition_error_rates({}, boxes);
        CHECK(!rates.false_negative_rate.has_value());
        CHECK(!rates.false_positive_rate.has_value());
    }
    SUBCASE("missing box raises") {
        Scanpath sp = path_from({{0.0, 0.0}});
        sp.trial_id = "unknown";
        CHECK_THROWS_AS(recognition_error_rates({sp}, boxes), UnsupportedDataError);
    }
}

TEST_CASE("angle-size correlation") {
    SUBCASE("perfectly linear pairs reach r = 1") {
        std::vector<double> xs, ys;
        for (int i = 0; i < 50; ++i) {
            xs.push_back(i);
            ys.push_back(3.0 * i + 2.0);
        }
        CHECK(*pearson(xs, ys) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("anti-linear pairs reach r = -1") {
        std::vector<double> xs, ys;
        for (int i = 0; i < 50; ++i) {
            xs.push_back(i);
            ys.push_back(-2.0 * i + 7.0);
        }
        CHECK(*pearson(xs, ys) == doctest::Approx(-1.0).epsilon(1e-9));
    }
    SUBCASE("independent pairs hover near zero") {
        RngStream rng(314159);
        std::vector<double> xs, ys;
        for (int i = 0; i < 10000; ++i) {
            xs.push_back(rng.uniform01());
            ys.push_back(rng.uniform01());
        }
        CHECK(std::fabs(*pearson(xs, ys)) < 0.05);
    }
    SUBCASE("zero variance is absent") {
        CHECK(!pearson({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}).has_value());
    }
    SUBCASE("pooled over scanpaths") {
        // Angles 180 then 90 with sizes 1 then 2: a defined correlation.
        const Scanpath sp = path_from({{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 2.0}});
        const std::optional<double> r = angle_size_correlation({sp});
        REQUIRE(r.has_value());
        CHECK(*r == doctest::Approx(-1.0).epsilon(1e-9));
    }
}
