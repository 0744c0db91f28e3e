#pragma once

// Synthetic ground-plane crowd: constant-speed agents with a random-walk
// heading, reflected at the grid border.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "groundflow/core.hpp"
#include "groundflow/rng.hpp"

namespace groundflow {

struct SceneConfig {
    GroundGrid grid{64, 64};
    int num_agents = 20;
    int num_frames = 60;
    double speed_min = 0.6;
    double speed_max = 1.2;
    double turn_sigma_rad = 0.15;
    double miss_rate = 0.0;
    double fp_rate_per_frame = 0.0;
    double jitter_sigma_cells = 0.0;
    double gaussian_sigma_cells = 1.0;
    double gaussian_radius_cells = 3.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (num_agents < 1) throw ConfigError("scene.num_agents must be >= 1");
        if (num_frames < 1) throw ConfigError("scene.num_frames must be >= 1");
        if (!(speed_min >= 0.0) || !(speed_max >= speed_min)) throw ConfigError("scene speed range is invalid");
        if (2.0 * speed_max >= std::min(grid.width(), grid.height()) - 1)
            throw ConfigError("scene.speed_max too large for the grid");
        if (!(turn_sigma_rad >= 0.0)) throw ConfigError("scene.turn_sigma_rad must be >= 0");
        if (!(miss_rate >= 0.0 && miss_rate <= 1.0)) throw ConfigError("scene.miss_rate must be in [0,1]");
        if (!(fp_rate_per_frame >= 0.0)) throw ConfigError("scene.fp_rate_per_frame must be >= 0");
        if (!(jitter_sigma_cells >= 0.0)) throw ConfigError("scene.jitter_sigma_cells must be >= 0");
        if (!(gaussian_sigma_cells > 0.0)) throw ConfigError("scene.gaussian_sigma_cells must be > 0");
        if (!(gaussian_radius_cells >= gaussian_sigma_cells))
            throw ConfigError("scene.gaussian_radius_cells must be >= gaussian_sigma_cells");
    }
};

/// Ground-truth motion of one agent at its cell for one frame pair.
struct GtOffsetSample {
    int x = 0;
    int y = 0;
    Vec2 offset;
};

struct SceneTruth {
    GroundGrid grid;
    double gaussian_sigma = 1.0;
    double gaussian_radius = 3.0;
    std::vector<Trajectory> trajectories;           // id = agent index, one point per frame
    std::vector<Heatmap> gt_heatmaps;               // per frame
    std::vector<OffsetField> gt_offsets;            // per frame pair (t, t+1)
    std::vector<std::vector<GtOffsetSample>> gt_samples;  // per frame pair, the cells where gt_offsets is defined
    std::vector<std::vector<Vec2>> gt_points;       // per frame, ordered by agent

    int num_frames() const { return static_cast<int>(gt_points.size()); }
    int num_pairs() const { return static_cast<int>(gt_offsets.size()); }
};

using FrameDetections = std::vector<std::vector<Detection>>;

/// Gaussian peaks pasted at each point; overlaps combine by maximum.
inline Heatmap render_heatmap(std::span<const Vec2> points, const GroundGrid& grid, double sigma, double radius,
                              std::span<const double> amplitudes = {}) {
    if (!(sigma > 0.0) || !(radius > 0.0)) throw ConfigError("render_heatmap: sigma and radius must be positive");
    std::vector<double> values(grid.cells(), 0.0);
    const double inv_two_s2 = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const Vec2 p = points[k];
        if (!grid.contains(p)) throw ConfigError("render_heatmap: point outside the grid");
        const double amp = amplitudes.empty() ? 1.0 : std::clamp(amplitudes[k], 0.0, 1.0);
        const int x0 = std::max(0, static_cast<int>(std::ceil(p.x - radius)));
        const int x1 = std::min(grid.width() - 1, static_cast<int>(std::floor(p.x + radius)));
        const int y0 = std::max(0, static_cast<int>(std::ceil(p.y - radius)));
        const int y1 = std::min(grid.height() - 1, static_cast<int>(std::floor(p.y + radius)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double d2 = (x - p.x) * (x - p.x) + (y - p.y) * (y - p.y);
                if (d2 > radius * radius) continue;
                double& v = values[grid.index(x, y)];
                v = std::max(v, amp * std::exp(-d2 * inv_two_s2));
            }
    }
    return Heatmap(grid, std::move(values));
}

inline std::pair<int, int> nearest_cell(const GroundGrid& g, Vec2 p) {
    const int x = std::clamp(static_cast<int>(std::lround(p.x)), 0, g.width() - 1);
    const int y = std::clamp(static_cast<int>(std::lround(p.y)), 0, g.height() - 1);
    return {x, y};
}

namespace detail {

enum StreamKind : std::uint64_t { kInit = 1, kMotion = 2, kDetect = 3, kFalsePositive = 4 };

/// Derives heatmaps, offsets and point lists from per-agent positions.
inline SceneTruth assemble_truth(const GroundGrid& grid, double sigma, double radius,
                                 const std::vector<std::vector<Vec2>>& positions) {
    SceneTruth truth;
    truth.grid = grid;
    truth.gaussian_sigma = sigma;
    truth.gaussian_radius = radius;
    const int agents = static_cast<int>(positions.size());
    const int frames = agents ? static_cast<int>(positions.front().size()) : 0;

    for (int a = 0; a < agents; ++a) {
        Trajectory traj(a);
        for (int f = 0; f < frames; ++f) traj.append(f, positions[a][f]);
        truth.trajectories.push_back(std::move(traj));
    }
    for (int f = 0; f < frames; ++f) {
        std::vector<Vec2> pts;
        pts.reserve(agents);
        for (int a = 0; a < agents; ++a) pts.push_back(positions[a][f]);
        truth.gt_heatmaps.push_back(render_heatmap(pts, grid, sigma, radius));
        truth.gt_points.push_back(std::move(pts));
    }
    for (int f = 0; f + 1 < frames; ++f) {
        std::vector<double> dx(grid.cells(), 0.0), dy(grid.cells(), 0.0);
        std::vector<char> taken(grid.cells(), 0);
        std::vector<GtOffsetSample> samples;
        for (int a = 0; a < agents; ++a) {
            const auto [cx, cy] = nearest_cell(grid, positions[a][f]);
            const auto i = grid.index(cx, cy);
            if (taken[i]) continue;  // lower agent index owns a shared cell
            taken[i] = 1;
            const Vec2 d = positions[a][f + 1] - positions[a][f];
            dx[i] = d.x;
            dy[i] = d.y;
            samples.push_back({cx, cy, d});
        }
        truth.gt_offsets.emplace_back(grid, std::move(dx), std::move(dy));
        truth.gt_samples.push_back(std::move(samples));
    }
    return truth;
}

}  // namespace detail

inline SceneTruth generate_scene(const SceneConfig& cfg) {
    cfg.validate();
    const auto& g = cfg.grid;
    const double max_x = g.width() - 1, max_y = g.height() - 1;
    std::vector<std::vector<Vec2>> positions(cfg.num_agents);

    for (int a = 0; a < cfg.num_agents; ++a) {
        CounterRng init(cfg.seed, CounterRng::stream_id(detail::kInit, a));
        Vec2 p{init.uniform(0.0, max_x), init.uniform(0.0, max_y)};
        double heading = init.uniform(0.0, 2.0 * std::numbers::pi);
        const double speed = init.uniform(cfg.speed_min, cfg.speed_max);
        auto& path = positions[a];
        path.reserve(cfg.num_frames);
        path.push_back(p);
        for (int f = 1; f < cfg.num_frames; ++f) {
            CounterRng step(cfg.seed, CounterRng::stream_id(detail::kMotion, a, f));
            if (cfg.turn_sigma_rad > 0.0) heading += step.normal(0.0, cfg.turn_sigma_rad);
            Vec2 v{speed * std::cos(heading), speed * std::sin(heading)};
            // Reflect the velocity before stepping so every step keeps its length.
            if (p.x + v.x < 0.0 || p.x + v.x > max_x) {
                v.x = -v.x;
                heading = std::numbers::pi - heading;
            }
            if (p.y + v.y < 0.0 || p.y + v.y > max_y) {
                v.y = -v.y;
                heading = -heading;
            }
            p = p + v;
            p.x = std::clamp(p.x, 0.0, max_x);
            p.y = std::clamp(p.y, 0.0, max_y);
            path.push_back(p);
        }
    }
    return detail::assemble_truth(g, cfg.gaussian_sigma_cells, cfg.gaussian_radius_cells, positions);
}

/// Missed detections, jitter, confidences and uniform false positives.
inline FrameDetections corrupt_detections(const SceneTruth& truth, const SceneConfig& cfg) {
    const auto& g = truth.grid;
    const double max_x = g.width() - 1, max_y = g.height() - 1;
    FrameDetections frames(truth.num_frames());
    for (int f = 0; f < truth.num_frames(); ++f) {
        auto& dets = frames[f];
        const auto& pts = truth.gt_points[f];
        for (std::size_t a = 0; a < pts.size(); ++a) {
            CounterRng rng(cfg.seed, CounterRng::stream_id(detail::kDetect, a, f));
            const double u_miss = rng.uniform();
            if (u_miss < cfg.miss_rate) continue;
            Vec2 p = pts[a];
            if (cfg.jitter_sigma_cells > 0.0) {
                p.x = std::clamp(p.x + rng.normal(0.0, cfg.jitter_sigma_cells), 0.0, max_x);
                p.y = std::clamp(p.y + rng.normal(0.0, cfg.jitter_sigma_cells), 0.0, max_y);
            }
            dets.push_back({f, p, rng.uniform(0.7, 1.0)});
        }
        CounterRng fp(cfg.seed, CounterRng::stream_id(detail::kFalsePositive, 0, f));
        const int count = fp.poisson(cfg.fp_rate_per_frame);
        for (int k = 0; k < count; ++k) {
            const Vec2 p{fp.uniform(0.0, max_x), fp.uniform(0.0, max_y)};
            dets.push_back({f, p, fp.uniform(0.05, 0.3)});
        }
    }
    return frames;
}

/// Keeps frames 0, stride, 2 stride, ... and renumbers them consecutively.
inline SceneTruth subsample_fps(const SceneTruth& truth, int stride) {
    if (stride < 1) throw ConfigError("stride must be >= 1");
    if (stride == 1) return truth;
    std::vector<std::vector<Vec2>> positions(truth.trajectories.size());
    for (std::size_t a = 0; a < truth.trajectories.size(); ++a) {
        const auto& pts = truth.trajectories[a].points();
        for (std::size_t f = 0; f < pts.size(); f += static_cast<std::size_t>(stride)) positions[a].push_back(pts[f].pos);
    }
    return detail::assemble_truth(truth.grid, truth.gaussian_sigma, truth.gaussian_radius, positions);
}

inline FrameDetections subsample_fps(const FrameDetections& frames, int stride) {
    if (stride < 1) throw ConfigError("stride must be >= 1");
    FrameDetections out;
    for (std::size_t f = 0; f < frames.size(); f += static_cast<std::size_t>(stride)) {
        auto dets = frames[f];
        for (auto& d : dets) d.time = static_cast<int>(out.size());
        out.push_back(std::move(dets));
    }
    return out;
}

}  // namespace groundflow
