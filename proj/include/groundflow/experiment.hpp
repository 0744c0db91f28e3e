#pragma once

// End-to-end runs on simulated scenes: detections -> heatmaps -> peaks ->
// confidence split -> offset fitting -> tracking -> metrics. Shared by the
// command-line tool and the acceptance suite.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "groundflow/core.hpp"
#include "groundflow/detect.hpp"
#include "groundflow/eval.hpp"
#include "groundflow/fit.hpp"
#include "groundflow/io.hpp"
#include "groundflow/parallel.hpp"
#include "groundflow/sim.hpp"
#include "groundflow/track/flow.hpp"
#include "groundflow/track/online.hpp"

namespace groundflow {

struct Ablations {
    bool no_mot = false;
    bool no_se = false;
    bool no_fb = false;
    bool no_motion_term = false;
};

inline const std::vector<std::string>& track_modes() {
    static const std::vector<std::string> modes{"mussp",           "mussp-nomotion", "bytestyle-kalman",
                                                "bytestyle-offset", "nearest",        "hungarian"};
    return modes;
}

inline void require_track_mode(const std::string& mode) {
    const auto& m = track_modes();
    if (std::find(m.begin(), m.end(), mode) == m.end()) throw ConfigError("unknown tracking mode: " + mode);
}

inline bool mode_needs_offsets(const std::string& mode) { return mode == "mussp" || mode == "bytestyle-offset"; }

struct ExperimentConfig {
    SceneConfig scene;
    int stride = 1;  // frame subsampling applied to the simulated sequence
    FitConfig fit;
    ReconstructionConfig recon;
    bool auto_window = true;     // size the fit window from the scene's top speed and the stride
    bool auto_schedule = true;   // soften the lambda ramp when one interval moves further than it reaches
    EdgeCostParams edges;
    NmsConfig nms;
    TwoStageConfig bytestyle;
    double eval_threshold = 2.5;
    std::vector<int> fps_strides{1, 2, 3, 5, 8};
    std::vector<std::uint64_t> sweep_seeds;  // empty: the scene seed only
    std::vector<std::string> sweep_modes{"mussp", "mussp-nomotion", "bytestyle-kalman", "bytestyle-offset"};
    Ablations ablations;
    std::string output_dir = "out";

    ExperimentConfig() {
        scene.miss_rate = 0.1;
        scene.fp_rate_per_frame = 0.5;
        scene.jitter_sigma_cells = 0.3;
    }

    /// Schedule for one stride. The weight falls to 1/2 at 10/(4 lambda); if
    /// the starting reach is short of the largest move plus a margin, init
    /// and increment shrink by the same factor and the epochs grow so the
    /// time spent at the cap is unchanged.
    FitConfig scheduled_fit(int at_stride) const {
        FitConfig f = fit;
        if (!auto_schedule) return f;
        const LambdaSchedule& s = fit.schedule;
        const double need = scene.speed_max * at_stride + kScheduleMargin;
        if (10.0 / (4.0 * s.init) >= need || s.init >= s.cap) return f;
        const double factor = 10.0 / (4.0 * need) / s.init;
        f.schedule.init = f.schedule.current = s.init * factor;
        f.schedule.increment = s.increment * factor;
        if (s.increment > 0.0) {
            const double ramp = std::ceil((s.cap - s.init) / s.increment);
            const double slow = std::ceil((s.cap - f.schedule.init) / f.schedule.increment);
            f.epochs = fit.epochs + static_cast<int>(slow - ramp);
        }
        return f;
    }
    static constexpr double kScheduleMargin = 1.5;  // cells beyond the largest move

    /// Odd window covering the largest per-interval displacement plus the
    /// reach of the softest weight function, capped at `recon.window_cells`.
    int fit_window(int at_stride) const {
        if (!auto_window) return recon.window_cells;
        const double reach = scene.speed_max * at_stride + 10.0 / (4.0 * scheduled_fit(at_stride).schedule.init);
        const int half = static_cast<int>(std::ceil(reach));
        return std::min(recon.window_cells, 2 * half + 1);
    }

    FitConfig fit_config(int at_stride) const {
        FitConfig f = scheduled_fit(at_stride);
        f.window_cells = fit_window(at_stride);
        if (ablations.no_mot) f.weights.use_mot = false;
        if (ablations.no_se) f.weights.lambda_se = 0.0;
        if (ablations.no_fb) f.weights.lambda_fb = 0.0;
        return f;
    }

    EdgeCostParams edge_params() const {
        EdgeCostParams e = edges;
        if (ablations.no_motion_term) e.sigma_m = 0.0;
        return e;
    }

    void validate() const {
        scene.validate();
        if (stride < 1) throw ConfigError("scene.stride must be >= 1");
        fit.validate();
        recon.validate();
        edges.validate();
        nms.validate();
        bytestyle.validate();
        if (!(eval_threshold > 0.0)) throw ConfigError("eval.threshold must be > 0");
        if (fps_strides.empty()) throw ConfigError("sweep.strides must not be empty");
        for (std::size_t i = 0; i < fps_strides.size(); ++i) {
            if (fps_strides[i] < 1) throw ConfigError("sweep.strides must be positive");
            if (i && fps_strides[i] <= fps_strides[i - 1]) throw ConfigError("sweep.strides must be sorted ascending");
        }
        for (const auto& m : sweep_modes) require_track_mode(m);
    }
};

namespace detail {

inline std::string join_list(const auto& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_same_v<std::decay_t<decltype(v[i])>, std::string>)
            s += v[i];
        else if constexpr (std::is_floating_point_v<std::decay_t<decltype(v[i])>>)
            s += format_double(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s;
}

/// Visits every configurable field as (key, value) with value an int,
/// double, bool, std::uint64_t, std::string or vector of those.
template <class F>
void visit_config(ExperimentConfig& c, F&& f) {
    int width = c.scene.grid.width(), height = c.scene.grid.height();
    double cell = c.scene.grid.cell_size_m();
    f("scene.width", width);
    f("scene.height", height);
    f("scene.cell_size_m", cell);
    c.scene.grid = GroundGrid(width, height, cell);
    f("scene.num_agents", c.scene.num_agents);
    f("scene.num_frames", c.scene.num_frames);
    f("scene.speed_min", c.scene.speed_min);
    f("scene.speed_max", c.scene.speed_max);
    f("scene.turn_sigma", c.scene.turn_sigma_rad);
    f("scene.miss_rate", c.scene.miss_rate);
    f("scene.fp_rate", c.scene.fp_rate_per_frame);
    f("scene.jitter", c.scene.jitter_sigma_cells);
    f("scene.gaussian_sigma", c.scene.gaussian_sigma_cells);
    f("scene.gaussian_radius", c.scene.gaussian_radius_cells);
    f("scene.seed", c.scene.seed);
    f("scene.stride", c.stride);

    f("fit.epochs", c.fit.epochs);
    f("fit.learning_rate", c.fit.learning_rate);
    std::string opt = to_string(c.fit.optimizer);
    f("fit.optimizer", opt);
    c.fit.optimizer = parse_optimizer(opt);
    f("fit.lambda_init", c.fit.schedule.init);
    f("fit.lambda_increment", c.fit.schedule.increment);
    f("fit.lambda_cap", c.fit.schedule.cap);
    c.fit.schedule.current = c.fit.schedule.init;
    f("fit.lambda_fb", c.fit.weights.lambda_fb);
    f("fit.lambda_se", c.fit.weights.lambda_se);
    f("fit.se_radius", c.fit.se_radius);
    f("fit.seed", c.fit.seed);
    f("fit.auto_schedule", c.auto_schedule);

    std::string window = c.auto_window ? "auto" : std::to_string(c.recon.window_cells);
    f("recon.window_cells", window);
    if (window == "auto") {
        c.auto_window = true;
    } else {
        c.auto_window = false;
        try {
            c.recon.window_cells = parse_number<int>(window, "recon.window_cells");
        } catch (const FormatError&) {
            throw ConfigError("recon.window_cells: expected an odd integer or 'auto'");
        }
    }
    c.recon.lambda_r = c.fit.schedule.init;
    c.fit.window_cells = c.recon.window_cells;

    f("edges.sigma_t", c.edges.sigma_t);
    f("edges.sigma_d", c.edges.sigma_d);
    f("edges.sigma_m", c.edges.sigma_m);
    f("edges.max_gap", c.edges.max_gap);
    f("edges.entry_cost", c.edges.entry_cost);
    f("edges.exit_cost", c.edges.exit_cost);
    f("edges.obs_cost_scale", c.edges.obs_cost_scale);
    f("edges.max_link_distance", c.edges.max_link_distance);

    f("nms.radius", c.nms.radius_cells);
    f("nms.max_candidates", c.nms.max_candidates);
    f("nms.min_value", c.nms.min_value);

    f("bytestyle.iou_threshold", c.bytestyle.iou_threshold);
    f("bytestyle.box_side", c.bytestyle.box_side);
    f("bytestyle.max_age", c.bytestyle.max_age);
    f("bytestyle.motion_max_dist", c.bytestyle.motion_max_dist);
    f("bytestyle.kalman_q", c.bytestyle.kalman.process);
    f("bytestyle.kalman_r", c.bytestyle.kalman.measurement);

    f("eval.threshold", c.eval_threshold);
    f("sweep.strides", c.fps_strides);
    f("sweep.seeds", c.sweep_seeds);
    f("sweep.modes", c.sweep_modes);

    f("ablations.no_mot", c.ablations.no_mot);
    f("ablations.no_se", c.ablations.no_se);
    f("ablations.no_fb", c.ablations.no_fb);
    f("ablations.no_motion_term", c.ablations.no_motion_term);
    f("output_dir", c.output_dir);
}

}  // namespace detail

/// Applies the keys of `kv` on top of the defaults. Unknown keys are errors.
inline ExperimentConfig parse_experiment(const KeyValues& kv) {
    ExperimentConfig c;
    detail::visit_config(c, [&](const std::string& key, auto& value) {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, std::vector<std::string>>) {
            if (!kv.has(key)) return;
            std::string raw;
            kv.get(key, raw);
            value.clear();
            std::stringstream ss(raw);
            std::string item;
            while (std::getline(ss, item, ','))
                if (auto t = detail::trim(item); !t.empty()) value.push_back(t);
        } else if constexpr (std::is_same_v<T, std::string> || std::is_arithmetic_v<T>) {
            kv.get(key, value);
        } else {
            kv.get_list(key, value);
        }
    });
    if (const auto extra = kv.unused(); !extra.empty()) throw ConfigError("unknown config key: " + extra.front());
    c.validate();
    return c;
}

inline ExperimentConfig load_experiment(const std::filesystem::path& path) {
    return parse_experiment(KeyValues::load(path));
}

inline std::string to_config_text(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    std::ostringstream out;
    detail::visit_config(c, [&](const std::string& key, auto& value) {
        using T = std::decay_t<decltype(value)>;
        out << key << " = ";
        if constexpr (std::is_same_v<T, bool>)
            out << (value ? "true" : "false");
        else if constexpr (std::is_same_v<T, std::string>)
            out << value;
        else if constexpr (std::is_floating_point_v<T>)
            out << format_double(value);
        else if constexpr (std::is_integral_v<T>)
            out << value;
        else
            out << detail::join_list(value);
        out << '\n';
    });
    return out.str();
}

// --- detection front end ----------------------------------------------------

struct PreparedDetections {
    std::vector<std::vector<Detection>> candidates;  // per frame, heatmap peaks with confidences
    std::vector<std::vector<Detection>> kept;        // per frame, peaks above the split
    double threshold = 0.0;
};

/// Renders each frame's detections into a confidence heatmap, extracts peaks
/// and splits all peak confidences of the sequence with 2-means.
inline PreparedDetections prepare_detections(const GroundGrid& g, const std::vector<std::vector<Detection>>& frames,
                                             double sigma, double radius, const NmsConfig& nms_cfg,
                                             double min_separation = 5.0) {
    PreparedDetections out;
    std::vector<double> confidences;
    for (std::size_t t = 0; t < frames.size(); ++t) {
        std::vector<Vec2> pts;
        std::vector<double> amps;
        for (const auto& d : frames[t]) {
            pts.push_back(d.pos);
            amps.push_back(d.confidence);
        }
        const Heatmap h = render_heatmap(pts, g, sigma, radius, amps);
        out.candidates.push_back(nms(h, nms_cfg, static_cast<int>(t)));
        for (const auto& d : out.candidates.back()) confidences.push_back(d.confidence);
    }
    // Split only when the confidences are clearly bimodal; a clean sequence
    // keeps everything (threshold 0).
    out.threshold = 0.0;
    if (!confidences.empty()) {
        const TwoMeans tm = two_means(confidences);
        if (cluster_separation(confidences, tm) >= min_separation) out.threshold = tm.threshold;
    }
    for (const auto& frame : out.candidates) {
        std::vector<Detection> keep;
        for (const auto& d : frame)
            if (out.threshold == 0.0 || d.confidence > out.threshold) keep.push_back(d);
        out.kept.push_back(std::move(keep));
    }
    return out;
}

inline std::vector<Vec2> positions(const std::vector<Detection>& dets) {
    std::vector<Vec2> p;
    p.reserve(dets.size());
    for (const auto& d : dets) p.push_back(d.pos);
    return p;
}

/// Detection-only supervision: unit peaks at the kept detections.
inline std::vector<FramePair> make_pairs(const GroundGrid& g, const PreparedDetections& prep, double sigma,
                                         double radius) {
    std::vector<Heatmap> maps;
    for (const auto& frame : prep.kept) {
        const auto pts = positions(frame);
        maps.push_back(render_heatmap(pts, g, sigma, radius));
    }
    std::vector<FramePair> pairs;
    for (std::size_t t = 0; t + 1 < maps.size(); ++t)
        pairs.push_back(FramePair::from_heatmaps(maps[t], maps[t + 1], positions(prep.kept[t]), positions(prep.kept[t + 1])));
    return pairs;
}

struct FittedMotion {
    std::vector<OffsetField> forward, backward;
    std::vector<EpochTrace> trace;  // summed over pairs
};

inline FittedMotion fit_motion(std::span<const FramePair> pairs, const FitConfig& cfg, unsigned workers = 0) {
    FittedMotion m;
    const auto results = fit_offsets(pairs, cfg, workers);
    for (const auto& r : results) {
        m.forward.push_back(r.forward);
        m.backward.push_back(r.backward);
    }
    m.trace = total_trace(results);
    return m;
}

// --- tracking ----------------------------------------------------------------

inline std::vector<Trajectory> run_tracker(const std::string& mode, const PreparedDetections& prep,
                                           const FittedMotion* motion, const ExperimentConfig& cfg) {
    require_track_mode(mode);
    if (mode_needs_offsets(mode) && !motion) throw ConfigError("mode " + mode + " needs fitted offsets");
    if (mode == "mussp" || mode == "mussp-nomotion") {
        std::vector<Detection> flat;
        for (const auto& f : prep.kept) flat.insert(flat.end(), f.begin(), f.end());
        EdgeCostParams p = cfg.edge_params();
        std::span<const OffsetField> bwd;
        if (mode == "mussp-nomotion")
            p.sigma_m = 0.0;
        else
            bwd = motion->backward;
        const auto graph = build_graph(flat, bwd, p);
        return paths_to_trajectories(graph, solve_ssp(graph));
    }
    MotionSource source = MotionSource::none;
    if (mode == "bytestyle-kalman") source = MotionSource::kalman;
    if (mode == "bytestyle-offset") source = MotionSource::learned_offset;
    if (mode == "nearest") source = MotionSource::nearest;
    if (mode == "hungarian") source = MotionSource::hungarian;
    TwoStageConfig tc = cfg.bytestyle;
    tc.conf_split = prep.threshold;
    TwoStageTracker tracker(source, tc);
    for (std::size_t t = 0; t < prep.candidates.size(); ++t) {
        const OffsetField* fwd = (motion && t > 0 && t - 1 < motion->forward.size()) ? &motion->forward[t - 1] : nullptr;
        tracker.step(static_cast<int>(t), prep.candidates[t], fwd);
    }
    return tracker.finish();
}

// --- scene-level runs -----------------------------------------------------------

struct Scene {
    SceneTruth truth;
    std::vector<std::vector<Detection>> detections;
};

/// Simulates the configured scene at `seed` and keeps every `stride`-th frame.
inline Scene simulate(const ExperimentConfig& cfg, std::uint64_t seed, int stride) {
    SceneConfig sc = cfg.scene;
    sc.seed = seed;
    const SceneTruth full = generate_scene(sc);
    Scene s;
    s.detections = subsample_fps(corrupt_detections(full, sc), stride);
    s.truth = subsample_fps(full, stride);
    return s;
}

struct RunResult {
    double threshold = 0.0;
    OffsetReport offsets;  // valid when fitted and the truth has GT cells
    bool fitted = false;
    std::map<std::string, MotReport> mot;
};

/// One (seed, stride) point: prepare, fit if any mode needs it, track, score.
inline RunResult run_point(const ExperimentConfig& cfg, std::uint64_t seed, int stride,
                           const std::vector<std::string>& modes, unsigned fit_workers = 1) {
    const Scene s = simulate(cfg, seed, stride);
    const auto& g = s.truth.grid;
    const auto prep = prepare_detections(g, s.detections, cfg.scene.gaussian_sigma_cells,
                                         cfg.scene.gaussian_radius_cells, cfg.nms);
    RunResult r;
    r.threshold = prep.threshold;
    FittedMotion motion;
    const bool need = std::any_of(modes.begin(), modes.end(), mode_needs_offsets);
    if (need) {
        const auto pairs = make_pairs(g, prep, cfg.scene.gaussian_sigma_cells, cfg.scene.gaussian_radius_cells);
        motion = fit_motion(pairs, cfg.fit_config(stride), fit_workers);
        r.fitted = true;
        if (s.truth.num_pairs() > 0) r.offsets = offset_error(motion.forward, s.truth);
    }
    for (const auto& m : modes) {
        const auto tracks = run_tracker(m, prep, need ? &motion : nullptr, cfg);
        r.mot[m] = clear_mot(tracks, s.truth.trajectories, cfg.eval_threshold);
    }
    return r;
}

struct SweepRow {
    int stride = 1;
    std::string mode;
    double mota = 0.0, idf1 = 0.0;  // means over seeds
};

/// Every (stride, seed) point runs in the worker pool with single-threaded
/// fitting inside, so rows do not depend on the worker count.
inline std::vector<SweepRow> sweep_fps(const ExperimentConfig& cfg, unsigned workers = 0) {
    std::vector<std::uint64_t> seeds = cfg.sweep_seeds;
    if (seeds.empty()) seeds.push_back(cfg.scene.seed);
    struct Job {
        int stride;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (int s : cfg.fps_strides)
        for (auto seed : seeds) jobs.push_back({s, seed});
    std::vector<RunResult> results(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) { results[k] = run_point(cfg, jobs[k].seed, jobs[k].stride, cfg.sweep_modes, 1); },
                 workers);
    std::vector<SweepRow> rows;
    for (int s : cfg.fps_strides)
        for (const auto& m : cfg.sweep_modes) {
            SweepRow row{s, m, 0.0, 0.0};
            int n = 0;
            for (std::size_t k = 0; k < jobs.size(); ++k)
                if (jobs[k].stride == s) {
                    row.mota += results[k].mot.at(m).mota;
                    row.idf1 += results[k].mot.at(m).idf1;
                    ++n;
                }
            row.mota /= n;
            row.idf1 /= n;
            rows.push_back(row);
        }
    return rows;
}

// --- plots ----------------------------------------------------------------------

struct Series {
    std::string name;
    std::vector<double> x, y;
};

/// Line plot with axes, ticks and a legend as a standalone SVG document.
inline std::string svg_line_plot(const std::vector<Series>& series, const std::string& title, const std::string& x_label,
                                 const std::string& y_label) {
    const double W = 640, H = 420, left = 70, right = 170, top = 40, bottom = 60;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 1, x1 += 1;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (W - left - right); };
    auto py = [&](double y) { return H - bottom - (y - y0) / (y1 - y0) * (H - top - bottom); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
    o << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        o << "<text x=\"" << px(xv) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        o << "<text x=\"" << left - 8 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
        o << "<line x1=\"" << left << "\" y1=\"" << py(yv) << "\" x2=\"" << W - right << "\" y2=\"" << py(yv)
          << "\" stroke=\"#ddd\"/>\n";
    }
    o << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    o << "<text transform=\"translate(18," << (top + H - bottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << y_label
      << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* c = colors[s % 6];
        o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            if (std::isfinite(series[s].y[i])) o << px(series[s].x[i]) << ',' << py(series[s].y[i]) << ' ';
        o << "\"/>\n";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            if (std::isfinite(series[s].y[i]))
                o << "<circle cx=\"" << px(series[s].x[i]) << "\" cy=\"" << py(series[s].y[i]) << "\" r=\"3\" fill=\"" << c << "\"/>\n";
        const double ly = top + 10 + 20.0 * s;
        o << "<line x1=\"" << W - right + 12 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 36 << "\" y2=\"" << ly
          << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << W - right + 42 << "\" y=\"" << ly + 4 << "\">" << series[s].name << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace groundflow
