#pragma once

// Frame-to-frame association: nearest-detection and bipartite motion
// baselines, and the two-stage (high then low confidence) tracker with a
// pluggable motion model.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "groundflow/core.hpp"
#include "groundflow/track/assignment.hpp"
#include "groundflow/track/kalman.hpp"

namespace groundflow {

/// For each source, the index of the nearest target within max_dist or -1.
/// Several sources may map to the same target.
inline std::vector<int> associate_nearest(std::span<const Vec2> sources, std::span<const Vec2> targets,
                                          double max_dist) {
    std::vector<int> match(sources.size(), -1);
    for (std::size_t i = 0; i < sources.size(); ++i) {
        double best = max_dist;
        for (std::size_t j = 0; j < targets.size(); ++j) {
            const double d = distance(sources[i], targets[j]);
            if (d <= best && (match[i] < 0 || d < best)) {
                best = d;
                match[i] = static_cast<int>(j);
            }
        }
    }
    return match;
}

/// One-to-one matching minimising total distance; pairs farther than
/// `cutoff` are forbidden.
inline Assignment associate_hungarian(std::span<const Vec2> sources, std::span<const Vec2> targets,
                                      double cutoff = std::numeric_limits<double>::infinity()) {
    std::vector<double> cost(sources.size() * targets.size());
    for (std::size_t i = 0; i < sources.size(); ++i)
        for (std::size_t j = 0; j < targets.size(); ++j) cost[i * targets.size() + j] = distance(sources[i], targets[j]);
    return solve_assignment(cost, static_cast<int>(sources.size()), static_cast<int>(targets.size()), cutoff);
}

/// IoU of two axis-aligned squares of side `side` centred at a and b.
inline double box_iou(Vec2 a, Vec2 b, double side) {
    const double ox = std::max(0.0, side - std::abs(a.x - b.x));
    const double oy = std::max(0.0, side - std::abs(a.y - b.y));
    const double inter = ox * oy;
    return inter / (2.0 * side * side - inter);
}

enum class MotionSource { none, kalman, learned_offset, nearest, hungarian };

inline MotionSource parse_motion_source(const std::string& s) {
    if (s == "none") return MotionSource::none;
    if (s == "kalman") return MotionSource::kalman;
    if (s == "learned-offset") return MotionSource::learned_offset;
    if (s == "nearest") return MotionSource::nearest;
    if (s == "hungarian") return MotionSource::hungarian;
    throw ConfigError("unknown motion source: " + s);
}

struct TwoStageConfig {
    double conf_split = 0.5;
    double iou_threshold = 0.1;
    double box_side = 5.0;  // cells; 1 m at 0.20 m per cell
    int max_age = 3;
    double motion_max_dist = 10.0;  // search radius of the nearest / bipartite motion baselines
    KalmanNoise kalman;

    void validate() const {
        if (!(box_side > 0.0)) throw ConfigError("bytestyle.box_side must be > 0");
        if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) throw ConfigError("bytestyle.iou_threshold must be in [0,1]");
        if (max_age < 0) throw ConfigError("bytestyle.max_age must be >= 0");
    }
};

struct OnlineTrack {
    Trajectory trajectory;
    Vec2 predicted;
    KalmanState kalman;
    int age = 0;  // frames since the last match
};

/// Stage 1 matches confident detections to all tracks by IoU of ground
/// boxes around the predicted positions; stage 2 matches the remaining
/// tracks to the low-confidence detections. Returns the detection index
/// matched to each track (or -1).
inline std::vector<int> associate_two_stage(std::span<const Vec2> predicted, std::span<const Detection> dets,
                                            const TwoStageConfig& cfg) {
    std::vector<int> track_match(predicted.size(), -1);
    std::vector<int> high, low;
    for (std::size_t d = 0; d < dets.size(); ++d)
        (dets[d].confidence >= cfg.conf_split ? high : low).push_back(static_cast<int>(d));

    auto stage = [&](const std::vector<int>& pool) {
        std::vector<int> tracks;
        for (std::size_t t = 0; t < predicted.size(); ++t)
            if (track_match[t] < 0) tracks.push_back(static_cast<int>(t));
        if (tracks.empty() || pool.empty()) return;
        std::vector<double> cost(tracks.size() * pool.size());
        for (std::size_t a = 0; a < tracks.size(); ++a)
            for (std::size_t b = 0; b < pool.size(); ++b) {
                const double iou = box_iou(predicted[tracks[a]], dets[pool[b]].pos, cfg.box_side);
                cost[a * pool.size() + b] =
                    (iou >= cfg.iou_threshold && iou > 0.0) ? 1.0 - iou : std::numeric_limits<double>::infinity();
            }
        // Every admissible pair is cheaper than leaving both ends unmatched.
        const auto result = solve_assignment(cost, static_cast<int>(tracks.size()), static_cast<int>(pool.size()), 1.0);
        for (auto [a, b] : result.pairs) track_match[tracks[a]] = pool[b];
    };
    stage(high);
    stage(low);
    return track_match;
}

class TwoStageTracker {
public:
    TwoStageTracker(MotionSource motion, TwoStageConfig cfg) : motion_(motion), cfg_(cfg) { cfg_.validate(); }

    /// Processes frame `time`. `forward` is the offset field of the pair
    /// (time - 1, time), needed only for the learned-offset motion model.
    void step(int time, std::span<const Detection> dets, const OffsetField* forward = nullptr) {
        predict(dets, forward);
        std::vector<Vec2> predicted;
        predicted.reserve(active_.size());
        for (const auto& t : active_) predicted.push_back(t.predicted);
        const auto match = associate_two_stage(predicted, dets, cfg_);

        std::vector<char> det_used(dets.size(), 0);
        for (std::size_t k = 0; k < active_.size(); ++k) {
            auto& tr = active_[k];
            if (match[k] >= 0) {
                const auto& d = dets[match[k]];
                det_used[match[k]] = 1;
                tr.trajectory.append(time, d.pos);
                tr.kalman = kalman_update(tr.kalman, d.pos, cfg_.kalman.measurement);
                tr.predicted = d.pos;
                tr.age = 0;
            } else {
                ++tr.age;
            }
        }
        std::vector<OnlineTrack> still;
        for (auto& tr : active_) {
            if (tr.age > cfg_.max_age)
                finished_.push_back(std::move(tr.trajectory));
            else
                still.push_back(std::move(tr));
        }
        active_ = std::move(still);
        for (std::size_t d = 0; d < dets.size(); ++d) {
            if (det_used[d] || dets[d].confidence < cfg_.conf_split) continue;
            OnlineTrack tr;
            tr.trajectory = Trajectory(next_id_++);
            tr.trajectory.append(time, dets[d].pos);
            tr.predicted = dets[d].pos;
            tr.kalman = kalman_init(dets[d].pos, cfg_.kalman.measurement);
            active_.push_back(std::move(tr));
        }
    }

    /// All trajectories, ordered by id.
    std::vector<Trajectory> finish() const {
        std::vector<Trajectory> out = finished_;
        for (const auto& t : active_) out.push_back(t.trajectory);
        std::sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) { return a.id() < b.id(); });
        return out;
    }

    const std::vector<OnlineTrack>& active() const { return active_; }

private:
    void predict(std::span<const Detection> dets, const OffsetField* forward) {
        std::vector<Vec2> det_pos;
        det_pos.reserve(dets.size());
        for (const auto& d : dets) det_pos.push_back(d.pos);
        switch (motion_) {
            case MotionSource::none: break;
            case MotionSource::kalman:
                for (auto& t : active_) {
                    t.kalman = kalman_predict(t.kalman, 1.0, cfg_.kalman.process);
                    t.predicted = t.kalman.position();
                }
                break;
            case MotionSource::learned_offset:
                if (forward)
                    for (auto& t : active_) t.predicted = t.predicted + forward->sample(t.predicted);
                break;
            case MotionSource::nearest: {
                std::vector<Vec2> heads;
                for (const auto& t : active_) heads.push_back(t.predicted);
                const auto m = associate_nearest(heads, det_pos, cfg_.motion_max_dist);
                for (std::size_t k = 0; k < active_.size(); ++k)
                    if (m[k] >= 0) active_[k].predicted = det_pos[m[k]];
                break;
            }
            case MotionSource::hungarian: {
                std::vector<Vec2> heads;
                for (const auto& t : active_) heads.push_back(t.predicted);
                const auto a = associate_hungarian(heads, det_pos, cfg_.motion_max_dist);
                for (auto [k, j] : a.pairs) active_[k].predicted = det_pos[j];
                break;
            }
        }
    }

    MotionSource motion_;
    TwoStageConfig cfg_;
    std::vector<OnlineTrack> active_;
    std::vector<Trajectory> finished_;
    int next_id_ = 0;
};

/// Motion-to-nearest baseline as an offset field: each detection cell at t
/// holds the displacement to its nearest detection at t + 1.
inline OffsetField nearest_offsets(const GroundGrid& g, std::span<const Vec2> dets_t, std::span<const Vec2> dets_t1,
                                   double max_dist) {
    std::vector<double> dx(g.cells(), 0.0), dy(g.cells(), 0.0);
    const auto m = associate_nearest(dets_t, dets_t1, max_dist);
    for (std::size_t i = 0; i < dets_t.size(); ++i) {
        if (m[i] < 0) continue;
        const int cx = std::clamp(static_cast<int>(std::lround(dets_t[i].x)), 0, g.width() - 1);
        const int cy = std::clamp(static_cast<int>(std::lround(dets_t[i].y)), 0, g.height() - 1);
        const Vec2 d = dets_t1[m[i]] - dets_t[i];
        dx[g.index(cx, cy)] = d.x;
        dy[g.index(cx, cy)] = d.y;
    }
    return OffsetField(g, std::move(dx), std::move(dy));
}

}  // namespace groundflow
