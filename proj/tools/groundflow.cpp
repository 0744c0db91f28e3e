// groundflow: simulate scenes, fit motion offsets, track and sweep.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "groundflow/experiment.hpp"
#include "groundflow/gradcheck.hpp"

namespace fs = std::filesystem;
using namespace groundflow;

namespace {

struct Options {
    std::string config;
    std::string out = "out";
    std::string scene_dir;    // defaults to --out
    std::string offsets_dir;  // defaults to --out
    std::string mode = "mussp";
    std::vector<std::string> overrides;
    long long seed = -1;
    int instances = 20;
};

// Config resolution: explicit --config, else the copy a previous `simulate`
// left in the scene directory, else built-in defaults. --set and --seed win.
ExperimentConfig resolve_config(const Options& o, const fs::path& scene_dir) {
    KeyValues kv;
    if (!o.config.empty())
        kv = KeyValues::load(o.config);
    else if (fs::exists(scene_dir / "config.txt"))
        kv = KeyValues::load(scene_dir / "config.txt");
    for (const auto& s : o.overrides) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        kv.set(detail::trim(s.substr(0, eq)), detail::trim(s.substr(eq + 1)));
    }
    if (o.seed >= 0) kv.set("scene.seed", std::to_string(o.seed));
    return parse_experiment(kv);
}

void ensure_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec || !fs::is_directory(p)) throw Error("cannot create output directory: " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + p.string());
    out << text;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Truth rebuilt from the written GT tracks (every agent spans every frame).
SceneTruth load_truth(const fs::path& dir, const ExperimentConfig& cfg) {
    const auto tracks = read_trajectories(dir / "gt_tracks.csv");
    std::vector<std::vector<Vec2>> positions;
    std::size_t frames = tracks.empty() ? 0 : tracks.front().size();
    for (const auto& t : tracks) {
        if (t.size() != frames) throw FormatError("gt_tracks.csv: tracks must cover every frame");
        std::vector<Vec2> p;
        for (std::size_t k = 0; k < t.points().size(); ++k) {
            if (t.points()[k].time != static_cast<int>(k)) throw FormatError("gt_tracks.csv: frames must start at 0 without gaps");
            p.push_back(t.points()[k].pos);
        }
        positions.push_back(std::move(p));
    }
    return detail::assemble_truth(cfg.scene.grid, cfg.scene.gaussian_sigma_cells, cfg.scene.gaussian_radius_cells,
                                  positions);
}

int frame_count(const fs::path& dir) {
    std::ifstream in(dir / "frames.txt");
    int n = 0;
    if (!(in >> n) || n < 0) throw FormatError((dir / "frames.txt").string() + ": missing frame count");
    return n;
}

int cmd_simulate(const Options& o) {
    const fs::path out = o.out;
    const auto cfg = resolve_config(o, out);
    ensure_dir(out);
    const Scene s = simulate(cfg, cfg.scene.seed, cfg.stride);
    write_text(out / "config.txt", to_config_text(cfg));
    write_text(out / "frames.txt", std::to_string(s.truth.num_frames()) + "\n");
    write_trajectories(out / "gt_tracks.csv", s.truth.trajectories);
    write_detections(out / "detections.csv", s.detections);
    write_heatmaps(out / "gt_heatmaps.gfh", s.truth.gt_heatmaps, s.truth.grid);
    write_offsets(out / "gt_offsets.gfh", s.truth.gt_offsets, s.truth.grid);
    std::size_t dets = 0;
    for (const auto& f : s.detections) dets += f.size();
    std::printf("simulated %d frames, %zu agents, %zu detections, %d pairs -> %s\n", s.truth.num_frames(),
                s.truth.trajectories.size(), dets, s.truth.num_pairs(), out.string().c_str());
    return 0;
}

PreparedDetections load_prepared(const fs::path& scene, const ExperimentConfig& cfg) {
    const auto frames = read_detections(scene / "detections.csv", frame_count(scene));
    return prepare_detections(cfg.scene.grid, frames, cfg.scene.gaussian_sigma_cells, cfg.scene.gaussian_radius_cells,
                              cfg.nms);
}

int cmd_fit(const Options& o) {
    const fs::path out = o.out;
    const fs::path scene = o.scene_dir.empty() ? out : fs::path(o.scene_dir);
    const auto cfg = resolve_config(o, scene);
    const auto prep = load_prepared(scene, cfg);
    const auto truth = load_truth(scene, cfg);
    ensure_dir(out);
    const auto pairs = make_pairs(cfg.scene.grid, prep, cfg.scene.gaussian_sigma_cells, cfg.scene.gaussian_radius_cells);
    const auto fitcfg = cfg.fit_config(cfg.stride);
    const auto motion = fit_motion(pairs, fitcfg);
    write_offsets(out / "offsets_fwd.gfh", motion.forward, cfg.scene.grid);
    write_offsets(out / "offsets_bwd.gfh", motion.backward, cfg.scene.grid);

    std::string trace = "epoch,lambda_r,l_mot,l_det,l_fb,l_se,total\n";
    for (const auto& e : motion.trace)
        trace += std::to_string(e.epoch) + "," + format_double(e.lambda_r) + "," + format_double(e.terms.l_mot) + "," +
                 format_double(e.terms.l_det) + "," + format_double(e.terms.l_fb) + "," + format_double(e.terms.l_se) +
                 "," + format_double(e.terms.total) + "\n";
    write_text(out / "loss_trace.csv", trace);

    nlohmann::json report = {{"pairs", pairs.size()}, {"window_cells", fitcfg.window_cells}};
    bool has_gt = false;
    for (const auto& s : truth.gt_samples) has_gt = has_gt || !s.empty();
    if (has_gt && truth.num_pairs() == static_cast<int>(motion.forward.size())) {
        const auto r = offset_error(motion.forward, truth);
        report["offsets"] = to_json(r);
        std::printf("fitted %zu pairs (window %d): l1 %.4f  angle %.2f deg  norm_err %.4f\n", pairs.size(),
                    fitcfg.window_cells, r.l1, r.angle_deg, r.norm_err);
    } else {
        std::printf("fitted %zu pairs (window %d): no ground-truth cells to score\n", pairs.size(), fitcfg.window_cells);
    }
    write_text(out / "offset_report.json", json_text(report));
    return 0;
}

int cmd_track(const Options& o) {
    require_track_mode(o.mode);
    const fs::path out = o.out;
    const fs::path scene = o.scene_dir.empty() ? out : fs::path(o.scene_dir);
    const fs::path offsets = o.offsets_dir.empty() ? out : fs::path(o.offsets_dir);
    const auto cfg = resolve_config(o, scene);
    const auto prep = load_prepared(scene, cfg);
    const auto truth = load_truth(scene, cfg);
    ensure_dir(out);

    FittedMotion motion;
    const bool need = mode_needs_offsets(o.mode);
    if (need) {
        motion.forward = read_offsets(offsets / "offsets_fwd.gfh");
        motion.backward = read_offsets(offsets / "offsets_bwd.gfh");
        const auto expected = prep.candidates.empty() ? 0 : prep.candidates.size() - 1;
        if (motion.forward.size() != expected || motion.backward.size() != expected)
            throw FormatError("offset files do not match the scene's frame count");
        for (const auto& f : motion.forward) require_same_grid(f.grid(), cfg.scene.grid, "offsets");
    }
    const auto tracks = run_tracker(o.mode, prep, need ? &motion : nullptr, cfg);
    write_trajectories(out / ("tracks_" + o.mode + ".csv"), tracks);

    nlohmann::json report;
    try {
        const auto r = clear_mot(tracks, truth.trajectories, cfg.eval_threshold);
        report = to_json(r);
        std::printf("%s: %zu tracks  MOTA %.4f  MOTP %.4f  IDF1 %.4f  (fp %ld fn %ld idsw %ld)\n", o.mode.c_str(),
                    tracks.size(), r.mota, r.motp, r.idf1, r.counts.fp, r.counts.fn, r.counts.idsw);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "warning: %s; MOTA reported as NaN\n", e.what());
        MotReport r;
        r.mota = r.motp = r.idf1 = r.idp = r.idr = std::numeric_limits<double>::quiet_NaN();
        report = to_json(r);
    }
    write_text(out / ("mot_" + o.mode + ".json"), json_text(report));
    return 0;
}

int cmd_sweep(const Options& o) {
    const fs::path out = o.out;
    const auto cfg = resolve_config(o, fs::path{});
    ensure_dir(out);
    const auto rows = sweep_fps(cfg);
    std::string csv = "stride,mode,mota,idf1\n";
    std::vector<Series> series;
    for (const auto& r : rows) {
        csv += std::to_string(r.stride) + "," + r.mode + "," + format_double(r.mota) + "," + format_double(r.idf1) + "\n";
        auto it = std::find_if(series.begin(), series.end(), [&](const Series& s) { return s.name == r.mode; });
        if (it == series.end()) {
            series.push_back({r.mode, {}, {}});
            it = series.end() - 1;
        }
        it->x.push_back(r.stride);
        it->y.push_back(r.mota);
        std::printf("stride %d  %-17s MOTA %.4f  IDF1 %.4f\n", r.stride, r.mode.c_str(), r.mota, r.idf1);
    }
    write_text(out / "sweep.csv", csv);
    write_text(out / "sweep.svg", svg_line_plot(series, "MOTA vs frame stride", "frame stride", "MOTA"));
    return 0;
}

int cmd_gradcheck(const Options& o) {
    const fs::path out = o.out;
    const std::uint64_t seed = o.seed >= 0 ? static_cast<std::uint64_t>(o.seed) : 1;
    const auto r = run_gradcheck(o.instances, seed);
    ensure_dir(out);
    const nlohmann::json j = {{"instances", r.instances}, {"l_mot", r.mot}, {"l_fb", r.fb}, {"l_se", r.se}, {"total", r.total}};
    write_text(out / "gradcheck.json", json_text(j));
    std::printf("max relative error over %d instances: l_mot %.3g  l_fb %.3g  l_se %.3g  total %.3g\n", r.instances,
                r.mot, r.fb, r.se, r.total);
    const double worst = std::max({r.mot, r.fb, r.se, r.total});
    if (!(worst < 1e-4)) {
        std::fprintf(stderr, "gradient check failed: %.3g >= 1e-4\n", worst);
        return 3;
    }
    return 0;
}

int cmd_ablate(const Options& o) {
    const fs::path out = o.out;
    const auto base = resolve_config(o, fs::path{});
    ensure_dir(out);
    struct Arm {
        const char* name;
        bool no_mot, no_se, no_fb;
    };
    const Arm arms[] = {{"full", false, false, false},
                        {"mot-only", false, true, true},
                        {"no-mot", true, false, false},
                        {"no-se", false, true, false},
                        {"no-fb", false, false, true}};
    const Scene s = simulate(base, base.scene.seed, base.stride);
    const auto& g = s.truth.grid;
    const auto prep = prepare_detections(g, s.detections, base.scene.gaussian_sigma_cells,
                                         base.scene.gaussian_radius_cells, base.nms);
    const auto pairs = make_pairs(g, prep, base.scene.gaussian_sigma_cells, base.scene.gaussian_radius_cells);
    if (s.truth.num_pairs() == 0) throw ConfigError("ablate: the scene has no frame pairs");

    nlohmann::json j = nlohmann::json::object();
    std::string csv = "arm,l1,angle_deg,norm_err,mota,idf1\n";
    for (const auto& arm : arms) {
        ExperimentConfig cfg = base;
        cfg.ablations = {arm.no_mot, arm.no_se, arm.no_fb, false};
        const auto motion = fit_motion(pairs, cfg.fit_config(cfg.stride));
        const auto off = offset_error(motion.forward, s.truth);
        const auto mot = clear_mot(run_tracker("mussp", prep, &motion, cfg), s.truth.trajectories, cfg.eval_threshold);
        j[arm.name] = {{"offsets", to_json(off)}, {"mussp", to_json(mot)}};
        csv += std::string(arm.name) + "," + format_double(off.l1) + "," + format_double(off.angle_deg) + "," +
               format_double(off.norm_err) + "," + format_double(mot.mota) + "," + format_double(mot.idf1) + "\n";
        std::printf("%-9s l1 %.4f  angle %6.2f  norm_err %.4f  | mussp MOTA %.4f IDF1 %.4f\n", arm.name, off.l1,
                    off.angle_deg, off.norm_err, mot.mota, mot.idf1);
    }
    const auto nomotion =
        clear_mot(run_tracker("mussp-nomotion", prep, nullptr, base), s.truth.trajectories, base.eval_threshold);
    j["no-motion-term"] = {{"mussp", to_json(nomotion)}};
    csv += "no-motion-term,,,," + format_double(nomotion.mota) + "," + format_double(nomotion.idf1) + "\n";
    std::printf("no-motion-term          mussp MOTA %.4f IDF1 %.4f\n", nomotion.mota, nomotion.idf1);
    write_text(out / "ablation.json", json_text(j));
    write_text(out / "ablation.csv", csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground-plane motion fitting and tracking on simulated crowds"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "key = value configuration file");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--seed", o.seed, "overrides scene.seed");
        sub->add_option("--set", o.overrides, "extra key=value overrides");
    };
    auto* sim = app.add_subcommand("simulate", "generate a scene and corrupted detections");
    auto* fit = app.add_subcommand("fit", "fit forward/backward offset fields for every frame pair");
    auto* track = app.add_subcommand("track", "associate detections into trajectories and score them");
    auto* sweep = app.add_subcommand("sweep-fps", "MOTA versus frame stride for each tracking mode");
    auto* grad = app.add_subcommand("gradcheck", "compare loss gradients with finite differences");
    auto* ablate = app.add_subcommand("ablate", "loss-term and motion-term ablations");
    for (auto* sub : {sim, fit, track, sweep, grad, ablate}) add_common(sub);
    for (auto* sub : {fit, track}) sub->add_option("--scene", o.scene_dir, "scene directory (default: --out)");
    track->add_option("--offsets", o.offsets_dir, "directory with fitted offsets (default: --out)");
    track->add_option("--mode", o.mode, "mussp | mussp-nomotion | bytestyle-kalman | bytestyle-offset | nearest | hungarian");
    grad->add_option("--instances", o.instances, "number of random 8x8 instances")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        if (*sim) return cmd_simulate(o);
        if (*fit) return cmd_fit(o);
        if (*track) return cmd_track(o);
        if (*sweep) return cmd_sweep(o);
        if (*grad) return cmd_gradcheck(o);
        if (*ablate) return cmd_ablate(o);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
