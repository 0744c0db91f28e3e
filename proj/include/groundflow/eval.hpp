#pragma once

// Tracking metrics (CLEAR MOT, identity F-score) and offset-field errors.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "groundflow/core.hpp"
#include "groundflow/sim.hpp"
#include "groundflow/track/assignment.hpp"

namespace groundflow {

struct MotCounts {
    long gt = 0, fp = 0, fn = 0, idsw = 0, matches = 0;
};

struct MotReport {
    double mota = 0.0;
    double motp = 0.0;  // mean matched distance in cells
    double idf1 = 0.0, idp = 0.0, idr = 0.0;
    MotCounts counts;
};

struct OffsetReport {
    double l1 = 0.0;
    double angle_deg = 0.0;
    double norm_err = 0.0;
};

inline nlohmann::json to_json(const MotReport& r) {
    return {{"mota", r.mota},
            {"motp", r.motp},
            {"idf1", r.idf1},
            {"idp", r.idp},
            {"idr", r.idr},
            {"counts",
             {{"gt", r.counts.gt},
              {"fp", r.counts.fp},
              {"fn", r.counts.fn},
              {"idsw", r.counts.idsw},
              {"matches", r.counts.matches}}}};
}

inline nlohmann::json to_json(const OffsetReport& r) {
    return {{"l1", r.l1}, {"angle_deg", r.angle_deg}, {"norm_err", r.norm_err}};
}

namespace detail {

struct FrameEntry {
    int id;
    Vec2 pos;
};

inline std::map<int, std::vector<FrameEntry>> by_frame(std::span<const Trajectory> tracks) {
    std::map<int, std::vector<FrameEntry>> frames;
    for (const auto& t : tracks)
        for (const auto& p : t.points()) frames[p.time].push_back({t.id(), p.pos});
    return frames;
}

}  // namespace detail

/// CLEAR MOT with match persistence: a (gt, pred) pair matched in the
/// previous frame is kept while it stays within the threshold; the rest are
/// matched by minimum total distance. An identity switch is counted when a
/// gt object is matched to a different prediction than at its last match.
/// Identity metrics use the one-to-one trajectory assignment maximising the
/// number of frames where the two are within the threshold.
inline MotReport clear_mot(std::span<const Trajectory> pred, std::span<const Trajectory> gt,
                           double dist_threshold = 2.5) {
    if (!(dist_threshold > 0.0)) throw ConfigError("clear_mot: threshold must be positive");
    const auto gt_frames = detail::by_frame(gt);
    const auto pred_frames = detail::by_frame(pred);
    MotReport r;
    for (const auto& [t, objs] : gt_frames) r.counts.gt += static_cast<long>(objs.size());
    if (r.counts.gt == 0) throw ConfigError("clear_mot: MOTA is undefined without ground truth");

    std::map<int, int> current;   // gt id -> pred id matched in the previous frame
    std::map<int, int> last_ever; // gt id -> pred id at its latest match
    double dist_sum = 0.0;
    std::vector<int> times;
    for (const auto& [t, _] : gt_frames) times.push_back(t);
    for (const auto& [t, _] : pred_frames) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    static const std::vector<detail::FrameEntry> none;
    for (int t : times) {
        const auto git = gt_frames.find(t);
        const auto pit = pred_frames.find(t);
        const auto& g = git == gt_frames.end() ? none : git->second;
        const auto& p = pit == pred_frames.end() ? none : pit->second;
        std::vector<char> g_used(g.size(), 0), p_used(p.size(), 0);
        std::map<int, int> next;
        auto record = [&](std::size_t gi, std::size_t pj) {
            g_used[gi] = p_used[pj] = 1;
            const int gid = g[gi].id, pid = p[pj].id;
            auto it = last_ever.find(gid);
            if (it != last_ever.end() && it->second != pid) ++r.counts.idsw;
            last_ever[gid] = pid;
            next[gid] = pid;
            dist_sum += distance(g[gi].pos, p[pj].pos);
            ++r.counts.matches;
        };
        for (std::size_t gi = 0; gi < g.size(); ++gi) {
            auto it = current.find(g[gi].id);
            if (it == current.end()) continue;
            for (std::size_t pj = 0; pj < p.size(); ++pj)
                if (!p_used[pj] && p[pj].id == it->second && distance(g[gi].pos, p[pj].pos) <= dist_threshold) {
                    record(gi, pj);
                    break;
                }
        }
        std::vector<std::size_t> gr, pc;
        for (std::size_t gi = 0; gi < g.size(); ++gi)
            if (!g_used[gi]) gr.push_back(gi);
        for (std::size_t pj = 0; pj < p.size(); ++pj)
            if (!p_used[pj]) pc.push_back(pj);
        std::vector<double> cost(gr.size() * pc.size());
        for (std::size_t a = 0; a < gr.size(); ++a)
            for (std::size_t b = 0; b < pc.size(); ++b) {
                const double d = distance(g[gr[a]].pos, p[pc[b]].pos);
                cost[a * pc.size() + b] = d <= dist_threshold ? d : std::numeric_limits<double>::infinity();
            }
        // Unbounded cutoff: maximum number of matches first, then least distance.
        const auto assign = solve_assignment(cost, static_cast<int>(gr.size()), static_cast<int>(pc.size()));
        for (auto [a, b] : assign.pairs) record(gr[a], pc[b]);
        for (char u : g_used) r.counts.fn += !u;
        for (char u : p_used) r.counts.fp += !u;
        current = std::move(next);
    }
    r.mota = 1.0 - static_cast<double>(r.counts.fn + r.counts.fp + r.counts.idsw) / static_cast<double>(r.counts.gt);
    r.motp = r.counts.matches ? dist_sum / static_cast<double>(r.counts.matches) : 0.0;

    // identity metrics
    long pred_total = 0;
    for (const auto& t : pred) pred_total += static_cast<long>(t.size());
    std::vector<double> overlap(gt.size() * pred.size(), 0.0);
    for (std::size_t a = 0; a < gt.size(); ++a)
        for (std::size_t b = 0; b < pred.size(); ++b) {
            int n = 0;
            for (const auto& q : gt[a].points()) {
                const auto* m = pred[b].find(q.time);
                if (m && distance(q.pos, m->pos) <= dist_threshold) ++n;
            }
            overlap[a * pred.size() + b] = -static_cast<double>(n);
        }
    const auto id_assign = solve_assignment(overlap, static_cast<int>(gt.size()), static_cast<int>(pred.size()), 0.0);
    const double idtp = -id_assign.cost;
    const double idfn = static_cast<double>(r.counts.gt) - idtp;
    const double idfp = static_cast<double>(pred_total) - idtp;
    r.idp = pred_total ? idtp / (idtp + idfp) : 0.0;
    r.idr = idtp / (idtp + idfn);
    r.idf1 = 2.0 * idtp / (2.0 * idtp + idfp + idfn);
    return r;
}

namespace detail {

struct OffsetAccum {
    double l1 = 0.0, angle = 0.0, norm = 0.0;
    long cells = 0, nonzero = 0;

    void add(Vec2 pred, Vec2 gt) {
        l1 += 0.5 * (std::abs(pred.x - gt.x) + std::abs(pred.y - gt.y));
        ++cells;
        const double ng = gt.norm();
        if (ng <= 1e-6) return;
        ++nonzero;
        norm += std::abs(pred.norm() - ng);
        if (pred.norm() == 0.0) {
            angle += 180.0;
        } else {
            const double cross = pred.x * gt.y - pred.y * gt.x;
            const double dot = pred.x * gt.x + pred.y * gt.y;
            angle += std::abs(std::atan2(cross, dot)) * 180.0 / std::numbers::pi;
        }
    }

    OffsetReport report() const {
        if (cells == 0) throw ConfigError("offset_error: no ground-truth cells to evaluate");
        OffsetReport r;
        r.l1 = l1 / static_cast<double>(cells);
        r.angle_deg = nonzero ? angle / static_cast<double>(nonzero) : 0.0;
        r.norm_err = nonzero ? norm / static_cast<double>(nonzero) : 0.0;
        return r;
    }
};

}  // namespace detail

/// Errors of a predicted field against the ground truth of one pair,
/// evaluated at the cells occupied by an agent at the start of the pair.
inline OffsetReport offset_error(const OffsetField& pred, const SceneTruth& truth, int pair) {
    if (pair < 0 || pair >= truth.num_pairs()) throw ConfigError("offset_error: pair index out of range");
    require_same_grid(pred.grid(), truth.grid, "offset_error");
    detail::OffsetAccum acc;
    for (const auto& s : truth.gt_samples[pair]) acc.add(pred.at(s.x, s.y), s.offset);
    return acc.report();
}

/// Pooled over all pairs: each GT cell of the sequence counts once.
inline OffsetReport offset_error(std::span<const OffsetField> pred, const SceneTruth& truth) {
    if (static_cast<int>(pred.size()) != truth.num_pairs())
        throw DimensionError("offset_error: one predicted field per pair is required");
    detail::OffsetAccum acc;
    for (int k = 0; k < truth.num_pairs(); ++k) {
        require_same_grid(pred[k].grid(), truth.grid, "offset_error");
        for (const auto& s : truth.gt_samples[k]) acc.add(pred[k].at(s.x, s.y), s.offset);
    }
    return acc.report();
}

}  // namespace groundflow
