#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "groundflow/core.hpp"

namespace groundflow {

struct NmsConfig {
    double radius_cells = 2.0;
    int max_candidates = 1000;
    double min_value = 1e-3;

    void validate() const {
        if (!(radius_cells > 0.0)) throw ConfigError("nms radius must be positive");
        if (max_candidates < 1) throw ConfigError("nms max_candidates must be >= 1");
    }
};

/// Greedy radius suppression over the 8-neighbourhood local maxima of the
/// heatmap. Candidates are visited by decreasing value, ties by (y, x).
inline std::vector<Detection> nms(const Heatmap& heat, const NmsConfig& cfg, int time = 0) {
    cfg.validate();
    const auto& g = heat.grid();
    struct Candidate {
        double value;
        int x, y;
    };
    std::vector<Candidate> cands;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const double v = heat.at(x, y);
            if (!(v > 0.0) || v < cfg.min_value) continue;
            bool is_max = true;
            for (int oy = -1; oy <= 1 && is_max; ++oy)
                for (int ox = -1; ox <= 1; ++ox) {
                    if ((ox || oy) && g.contains(x + ox, y + oy) && heat.at(x + ox, y + oy) > v) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) cands.push_back({v, x, y});
        }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    std::vector<Detection> out;
    const double r2 = cfg.radius_cells * cfg.radius_cells;
    for (const auto& c : cands) {
        if (static_cast<int>(out.size()) >= cfg.max_candidates) break;
        const bool suppressed = std::any_of(out.begin(), out.end(), [&](const Detection& d) {
            const double ex = d.pos.x - c.x, ey = d.pos.y - c.y;
            return ex * ex + ey * ey <= r2;
        });
        if (!suppressed) out.push_back({time, {double(c.x), double(c.y)}, c.value});
    }
    return out;
}

struct TwoMeans {
    double lo = 0.0, hi = 0.0;  // final centroids
    double threshold = 0.0;     // their midpoint
};

/// Two-means clustering of 1-D confidences: centroids start at (min, max)
/// and Lloyd iterations run to convergence. Values strictly above the
/// threshold form the "true detection" cluster.
inline TwoMeans two_means(std::span<const double> values) {
    if (values.empty()) throw ConfigError("split_kmeans2: empty input");
    // sorted copy: sums then do not depend on input order
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double lo = sorted.front(), hi = sorted.back();
    if (lo == hi) return {lo, hi, lo};
    for (int iter = 0; iter < 1000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        double s_lo = 0.0, s_hi = 0.0;
        std::size_t n_lo = 0, n_hi = 0;
        for (double v : sorted) {
            if (v > mid) {
                s_hi += v;
                ++n_hi;
            } else {
                s_lo += v;
                ++n_lo;
            }
        }
        const double new_lo = n_lo ? s_lo / n_lo : lo;
        const double new_hi = n_hi ? s_hi / n_hi : hi;
        const bool done = std::abs(new_lo - lo) <= 1e-9 && std::abs(new_hi - hi) <= 1e-9;
        lo = new_lo;
        hi = new_hi;
        if (done) break;
    }
    return {lo, hi, 0.5 * (lo + hi)};
}

inline double split_kmeans2(std::span<const double> values) { return two_means(values).threshold; }

/// Centroid gap over the pooled within-cluster standard deviation. Halving
/// a single uniform cluster gives sqrt(12) ~ 3.46, so values well above
/// that indicate two genuine modes.
inline double cluster_separation(std::span<const double> values, const TwoMeans& tm) {
    double ss = 0.0;
    for (double v : values) ss += std::min((v - tm.lo) * (v - tm.lo), (v - tm.hi) * (v - tm.hi));
    const double sd = values.empty() ? 0.0 : std::sqrt(ss / static_cast<double>(values.size()));
    if (sd == 0.0) return tm.hi > tm.lo ? std::numeric_limits<double>::infinity() : 0.0;
    return (tm.hi - tm.lo) / sd;
}

/// Two-means objective (within-cluster sum of squares) for centroids lo, hi.
inline double kmeans2_objective(std::span<const double> values, double lo, double hi) {
    double s = 0.0;
    for (double v : values) s += std::min((v - lo) * (v - lo), (v - hi) * (v - hi));
    return s;
}

}  // namespace groundflow
