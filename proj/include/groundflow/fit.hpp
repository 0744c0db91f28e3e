#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "groundflow/core.hpp"
#include "groundflow/loss.hpp"
#include "groundflow/parallel.hpp"
#include "groundflow/warp.hpp"

namespace groundflow {

enum class Optimizer { plain_gradient, momentum, adaptive_moments };

inline Optimizer parse_optimizer(const std::string& s) {
    if (s == "plain-gradient") return Optimizer::plain_gradient;
    if (s == "momentum") return Optimizer::momentum;
    if (s == "adaptive-moments") return Optimizer::adaptive_moments;
    throw ConfigError("unknown optimizer: " + s);
}

inline const char* to_string(Optimizer o) {
    switch (o) {
        case Optimizer::plain_gradient: return "plain-gradient";
        case Optimizer::momentum: return "momentum";
        case Optimizer::adaptive_moments: return "adaptive-moments";
    }
    return "?";
}

struct FitConfig {
    int epochs = 120;
    double learning_rate = 0.1;
    LambdaSchedule schedule;
    LossWeights weights;
    Optimizer optimizer = Optimizer::adaptive_moments;
    int window_cells = 59;
    double se_radius = 3.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (epochs < 1) throw ConfigError("fit.epochs must be >= 1");
        if (!(learning_rate > 0.0)) throw ConfigError("fit.learning_rate must be > 0");
        schedule.validate();
        weights.validate();
        ReconstructionConfig{schedule.init, window_cells}.validate();
    }
};

/// Supervision for one frame pair. `heatmap_*` are the warped inputs and
/// `target_*` the (unsmoothed) detection maps they are compared against;
/// `points_*` anchor the spatial-extent term.
struct FramePair {
    GroundGrid grid;
    std::vector<double> heatmap_t, heatmap_t1;
    std::vector<double> target_t, target_t1;
    std::vector<Vec2> points_t, points_t1;

    /// Detection-only setting: the same maps are both input and target.
    static FramePair from_heatmaps(const Heatmap& a, const Heatmap& b, std::vector<Vec2> pa, std::vector<Vec2> pb) {
        require_same_grid(a.grid(), b.grid(), "frame pair");
        FramePair p;
        p.grid = a.grid();
        p.heatmap_t.assign(a.values().begin(), a.values().end());
        p.heatmap_t1.assign(b.values().begin(), b.values().end());
        p.target_t = p.heatmap_t;
        p.target_t1 = p.heatmap_t1;
        p.points_t = std::move(pa);
        p.points_t1 = std::move(pb);
        return p;
    }
};

struct EpochTrace {
    int epoch = 0;
    double lambda_r = 0.0;
    LossTerms terms;
};

struct FitResult {
    OffsetField forward;
    OffsetField backward;
    std::vector<EpochTrace> trace;
};

namespace detail {

class ParamUpdater {
public:
    ParamUpdater(Optimizer kind, double lr, std::size_t n) : kind_(kind), lr_(lr), m_(n, 0.0), v_(n, 0.0) {}

    void step(std::vector<double>& x, const std::vector<double>& g) {
        ++t_;
        switch (kind_) {
            case Optimizer::plain_gradient:
                for (std::size_t i = 0; i < x.size(); ++i) x[i] -= lr_ * g[i];
                break;
            case Optimizer::momentum:
                for (std::size_t i = 0; i < x.size(); ++i) {
                    m_[i] = 0.9 * m_[i] + g[i];
                    x[i] -= lr_ * m_[i];
                }
                break;
            case Optimizer::adaptive_moments: {
                constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
                const double c1 = 1.0 - std::pow(b1, t_), c2 = 1.0 - std::pow(b2, t_);
                for (std::size_t i = 0; i < x.size(); ++i) {
                    m_[i] = b1 * m_[i] + (1 - b1) * g[i];
                    v_[i] = b2 * v_[i] + (1 - b2) * g[i] * g[i];
                    x[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps);
                }
                break;
            }
        }
    }

private:
    Optimizer kind_;
    double lr_;
    int t_ = 0;
    std::vector<double> m_, v_;
};

inline void clamp_offsets(std::vector<double>& v, double limit) {
    for (double& d : v) d = std::clamp(d, -limit, limit);
}

}  // namespace detail

/// Fits forward and backward offsets for one pair from zero initialisation.
inline FitResult fit_pair(const FramePair& pair, const FitConfig& cfg) {
    cfg.validate();
    const auto& g = pair.grid;
    const auto n = g.cells();
    for (const auto* v : {&pair.heatmap_t, &pair.heatmap_t1, &pair.target_t, &pair.target_t1})
        if (v->size() != n) throw DimensionError("fit: pair maps do not match the grid");

    std::vector<double> fdx(n, 0.0), fdy(n, 0.0), bdx(n, 0.0), bdy(n, 0.0);
    detail::ParamUpdater ufdx(cfg.optimizer, cfg.learning_rate, n), ufdy(cfg.optimizer, cfg.learning_rate, n);
    detail::ParamUpdater ubdx(cfg.optimizer, cfg.learning_rate, n), ubdy(cfg.optimizer, cfg.learning_rate, n);
    ReconstructionConfig rcfg{cfg.schedule.current, cfg.window_cells};
    const double limit = rcfg.max_motion();
    LambdaSchedule schedule = cfg.schedule;
    FitResult result;
    result.trace.reserve(cfg.epochs);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        rcfg.lambda_r = schedule.current;
        const ScalarField target_t = smooth_target(g, pair.target_t, rcfg, 1);
        const ScalarField target_t1 = smooth_target(g, pair.target_t1, rcfg, 1);
        const PairView view{.grid = g,
                            .heatmap_t = pair.heatmap_t,
                            .heatmap_t1 = pair.heatmap_t1,
                            .target_t = target_t.values,
                            .target_t1 = target_t1.values,
                            .points_t = pair.points_t,
                            .points_t1 = pair.points_t1,
                            .fwd_dx = fdx,
                            .fwd_dy = fdy,
                            .bwd_dx = bdx,
                            .bwd_dy = bdy,
                            .se_radius = cfg.se_radius};
        PairGradients grads;
        const LossTerms terms = loss_total(view, rcfg, cfg.weights, &grads, 1);
        if (!std::isfinite(terms.total)) throw NumericError("fit diverged: loss is not finite at epoch " + std::to_string(epoch));
        result.trace.push_back({epoch, rcfg.lambda_r, terms});

        ufdx.step(fdx, grads.fwd.dx);
        ufdy.step(fdy, grads.fwd.dy);
        ubdx.step(bdx, grads.bwd.dx);
        ubdy.step(bdy, grads.bwd.dy);
        for (auto* v : {&fdx, &fdy, &bdx, &bdy}) detail::clamp_offsets(*v, limit);
        schedule = schedule_step(schedule);
    }
    result.forward = OffsetField(g, std::move(fdx), std::move(fdy));
    result.backward = OffsetField(g, std::move(bdx), std::move(bdy));
    return result;
}

/// Pairs are independent and fitted in parallel; each result depends only
/// on its own pair, so output is identical for any worker count.
inline std::vector<FitResult> fit_offsets(std::span<const FramePair> pairs, const FitConfig& cfg,
                                          unsigned workers = 0) {
    cfg.validate();
    for (const auto& p : pairs)
        if (!(p.grid == pairs.front().grid)) throw DimensionError("fit: all pairs must share one grid");
    std::vector<FitResult> results(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t k) { results[k] = fit_pair(pairs[k], cfg); }, workers);
    return results;
}

/// Sum of the per-pair traces, epoch by epoch.
inline std::vector<EpochTrace> total_trace(std::span<const FitResult> results) {
    std::vector<EpochTrace> out;
    for (const auto& r : results) {
        if (out.empty()) {
            out = r.trace;
            continue;
        }
        for (std::size_t e = 0; e < out.size() && e < r.trace.size(); ++e) {
            auto& a = out[e].terms;
            const auto& b = r.trace[e].terms;
            a.l_mot += b.l_mot;
            a.l_det += b.l_det;
            a.l_fb += b.l_fb;
            a.l_se += b.l_se;
            a.total += b.total;
        }
    }
    return out;
}

/// Max over coordinates of |analytic - central difference| /
/// max(1e-8, |analytic| + |numeric|).
template <typename F>
double finite_diff_check(F&& f, std::span<const double> analytic, std::vector<double> point, double eps = 1e-4) {
    if (analytic.size() != point.size()) throw DimensionError("finite_diff_check: gradient size mismatch");
    if (!(eps > 0.0)) throw ConfigError("finite_diff_check: eps must be positive");
    double worst = 0.0;
    for (std::size_t k = 0; k < point.size(); ++k) {
        const double x0 = point[k];
        point[k] = x0 + eps;
        const double fp = f(std::span<const double>(point));
        point[k] = x0 - eps;
        const double fm = f(std::span<const double>(point));
        point[k] = x0;
        const double numeric = (fp - fm) / (2.0 * eps);
        const double err = std::abs(analytic[k] - numeric) / std::max(1e-8, std::abs(analytic[k]) + std::abs(numeric));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace groundflow
