#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "groundflow/experiment.hpp"

using namespace groundflow;

namespace {

ExperimentConfig parse_text(const std::string& text) {
    std::istringstream in(text);
    return parse_experiment(KeyValues::parse(in));
}

ExperimentConfig tiny() {
    return parse_text(
        "scene.width = 24\nscene.height = 24\nscene.num_agents = 4\nscene.num_frames = 8\n"
        "fit.epochs = 6\nsweep.strides = 1, 2\nsweep.seeds = 3, 4\n");
}

}  // namespace

TEST(ExperimentConfig, DefaultsRoundTripThroughText) {
    const ExperimentConfig def;
    const auto back = parse_text(to_config_text(def));
    EXPECT_EQ(to_config_text(back), to_config_text(def));
    EXPECT_TRUE(back.auto_window);
    EXPECT_EQ(back.scene.fp_rate_per_frame, 0.5);
}

TEST(ExperimentConfig, OverridesAndRoundTrip) {
    const auto c = parse_text(
        "scene.num_agents = 7\nfit.learning_rate = 0.05\nrecon.window_cells = 15\n"
        "sweep.modes = nearest, hungarian\nablations.no_fb = true\nedges.max_link_distance = 8.5\n");
    EXPECT_EQ(c.scene.num_agents, 7);
    EXPECT_EQ(c.fit.learning_rate, 0.05);
    EXPECT_FALSE(c.auto_window);
    EXPECT_EQ(c.fit_window(5), 15);
    EXPECT_EQ(c.sweep_modes, (std::vector<std::string>{"nearest", "hungarian"}));
    EXPECT_EQ(c.fit_config(1).weights.lambda_fb, 0.0);
    EXPECT_EQ(c.edge_params().max_link_distance, 8.5);
    EXPECT_EQ(to_config_text(parse_text(to_config_text(c))), to_config_text(c));
}

TEST(ExperimentConfig, AutoWindowGrowsWithStride) {
    ExperimentConfig c;
    // reach = speed_max * stride + 10 / (4 * lambda_init of that stride)
    EXPECT_EQ(c.fit_window(1), 11);  // ceil(1.2 + 3.125) = 5
    EXPECT_EQ(c.fit_window(5), 29);  // ceil(6 + 7.5) = 14
    EXPECT_EQ(c.fit_window(100), c.recon.window_cells);
    for (int s = 1; s < 12; ++s) {
        EXPECT_EQ(c.fit_window(s) % 2, 1);
        EXPECT_LE(c.fit_window(s), c.fit_window(s + 1));
    }
    c.auto_schedule = false;
    EXPECT_EQ(c.fit_window(5), 21);  // ceil(6 + 3.125) = 10
}

TEST(ExperimentConfig, ScheduleSoftensForLargeMoves) {
    ExperimentConfig c;
    const auto one = c.fit_config(1);
    EXPECT_EQ(one.schedule.init, c.fit.schedule.init);
    EXPECT_EQ(one.schedule.increment, c.fit.schedule.increment);
    EXPECT_EQ(one.epochs, c.fit.epochs);

    const auto five = c.fit_config(5);
    // half-weight reach covers the 6-cell move plus the margin
    EXPECT_NEAR(10.0 / (4.0 * five.schedule.init), 6.0 + ExperimentConfig::kScheduleMargin, 1e-12);
    EXPECT_EQ(five.schedule.current, five.schedule.init);
    EXPECT_NEAR(five.schedule.increment / five.schedule.init, c.fit.schedule.increment / c.fit.schedule.init, 1e-12);
    // same number of epochs at the cap
    auto tail = [](const FitConfig& f) {
        return f.epochs - std::ceil((f.schedule.cap - f.schedule.init) / f.schedule.increment);
    };
    EXPECT_EQ(tail(five), tail(one));
    EXPECT_GT(five.epochs, one.epochs);

    c.auto_schedule = false;
    EXPECT_EQ(c.fit_config(5).schedule.init, c.fit.schedule.init);
    EXPECT_FALSE(parse_text("fit.auto_schedule = false\n").auto_schedule);
}

TEST(ExperimentConfig, Ablations) {
    ExperimentConfig c;
    c.ablations = {true, true, false, true};
    const auto f = c.fit_config(2);
    EXPECT_FALSE(f.weights.use_mot);
    EXPECT_EQ(f.weights.lambda_se, 0.0);
    EXPECT_GT(f.weights.lambda_fb, 0.0);
    EXPECT_EQ(f.window_cells, c.fit_window(2));
    EXPECT_EQ(c.edge_params().sigma_m, 0.0);
}

TEST(ExperimentConfig, Errors) {
    EXPECT_THROW(parse_text("scene.fps = 3\n"), ConfigError);
    EXPECT_THROW(parse_text("sweep.strides = 1, 5, 3\n"), ConfigError);
    EXPECT_THROW(parse_text("sweep.strides = 0\n"), ConfigError);
    EXPECT_THROW(parse_text("sweep.modes = mussp, sort\n"), ConfigError);
    EXPECT_THROW(parse_text("recon.window_cells = big\n"), ConfigError);
    EXPECT_THROW(parse_text("recon.window_cells = 4\n"), ConfigError);
    EXPECT_THROW(parse_text("scene.num_agents = 0\n"), ConfigError);
    EXPECT_THROW(parse_text("fit.optimizer = lbfgs\n"), ConfigError);
    EXPECT_THROW(require_track_mode("sort"), ConfigError);
}

TEST(PrepareDetections, CleanSequenceKeepsEverything) {
    GroundGrid g(30, 30);
    std::vector<std::vector<Detection>> frames(3);
    for (int t = 0; t < 3; ++t)
        for (int k = 0; k < 3; ++k) frames[t].push_back({t, {5.0 + 8 * k, 10.0 + t}, 0.7 + 0.1 * k});
    const auto prep = prepare_detections(g, frames, 1.0, 3.0, NmsConfig{});
    EXPECT_EQ(prep.threshold, 0.0);
    for (int t = 0; t < 3; ++t) EXPECT_EQ(prep.kept[t].size(), 3u);
}

TEST(PrepareDetections, BimodalConfidencesAreSplit) {
    GroundGrid g(40, 40);
    std::vector<std::vector<Detection>> frames(4);
    for (int t = 0; t < 4; ++t)
        for (int k = 0; k < 6; ++k) {
            const bool real = k % 2 == 0;
            frames[t].push_back({t, {4.0 + 6 * k, 8.0 + 5 * (k % 3) + t}, real ? 0.9 + 0.01 * k : 0.1 + 0.01 * k});
        }
    const auto prep = prepare_detections(g, frames, 1.0, 3.0, NmsConfig{});
    EXPECT_GT(prep.threshold, 0.2);
    EXPECT_LT(prep.threshold, 0.8);
    for (int t = 0; t < 4; ++t) {
        EXPECT_EQ(prep.candidates[t].size(), 6u);
        ASSERT_EQ(prep.kept[t].size(), 3u);
        for (const auto& d : prep.kept[t]) EXPECT_GT(d.confidence, 0.8);
    }
}

TEST(RunPoint, DeterministicAndComplete) {
    const auto c = tiny();
    const auto a = run_point(c, 3, 2, track_modes(), 1);
    const auto b = run_point(c, 3, 2, track_modes(), 2);
    EXPECT_TRUE(a.fitted);
    EXPECT_EQ(a.mot.size(), track_modes().size());
    EXPECT_EQ(a.offsets.l1, b.offsets.l1);
    EXPECT_EQ(a.threshold, b.threshold);
    for (const auto& m : track_modes()) {
        EXPECT_EQ(a.mot.at(m).mota, b.mot.at(m).mota) << m;
        EXPECT_EQ(a.mot.at(m).idf1, b.mot.at(m).idf1) << m;
        EXPECT_LE(a.mot.at(m).mota, 1.0);
    }
    const auto plain = run_point(c, 3, 2, {"nearest"}, 1);
    EXPECT_FALSE(plain.fitted);
    EXPECT_EQ(plain.mot.at("nearest").mota, a.mot.at("nearest").mota);
}

TEST(SweepFps, IndependentOfWorkerCount) {
    auto c = tiny();
    c.sweep_modes = {"mussp", "nearest"};
    const auto r1 = sweep_fps(c, 1);
    const auto r2 = sweep_fps(c, 3);
    ASSERT_EQ(r1.size(), 4u);
    ASSERT_EQ(r2.size(), r1.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        EXPECT_EQ(r1[i].stride, r2[i].stride);
        EXPECT_EQ(r1[i].mode, r2[i].mode);
        EXPECT_EQ(r1[i].mota, r2[i].mota);
        EXPECT_EQ(r1[i].idf1, r2[i].idf1);
    }
}

TEST(RunTracker, OffsetModesNeedMotion) {
    const auto c = tiny();
    PreparedDetections prep;
    EXPECT_THROW(run_tracker("mussp", prep, nullptr, c), ConfigError);
    EXPECT_THROW(run_tracker("bytestyle-offset", prep, nullptr, c), ConfigError);
    EXPECT_TRUE(run_tracker("nearest", prep, nullptr, c).empty());
}

TEST(SvgPlot, WellFormedWithOneLinePerSeries) {
    const std::vector<Series> s{{"a", {1, 2, 3}, {0.5, 0.6, 0.7}}, {"b", {1, 2, 3}, {0.4, NAN, 0.9}}};
    const auto svg = svg_line_plot(s, "title", "x", "y");
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    std::size_t lines = 0;
    for (auto p = svg.find("<polyline"); p != std::string::npos; p = svg.find("<polyline", p + 1)) ++lines;
    EXPECT_EQ(lines, 2u);
    EXPECT_EQ(svg.find("nan"), std::string::npos);
}
