#pragma once

// Finite-difference audit of the loss gradients on small random instances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "groundflow/fit.hpp"
#include "groundflow/loss.hpp"
#include "groundflow/rng.hpp"

namespace groundflow {

struct GradcheckInstance {
    GroundGrid grid{8, 8};
    double lambda_r = 0.8;
    std::vector<double> heat_t, heat_t1;
    std::vector<double> fdx, fdy, bdx, bdy;
    std::vector<Vec2> points_t, points_t1;
};

namespace detail {

/// Keeps a coordinate at least `gap` away from integers so that bilinear
/// sampling and border clamps have no kink inside the difference stencil.
inline double off_lattice(double v, double gap = 0.01) {
    const double f = v - std::floor(v);
    if (f < gap) return std::floor(v) + gap;
    if (f > 1.0 - gap) return std::floor(v) + 1.0 - gap;
    return v;
}

}  // namespace detail

/// Random heatmaps in (0, 1], offsets with |d| <= 2 in general position and
/// two anchor points per frame; lambda_r drawn from [0.8, 5].
inline GradcheckInstance random_gradcheck_instance(std::uint64_t seed, int index) {
    CounterRng rng(seed, CounterRng::stream_id(17, static_cast<std::uint64_t>(index)));
    GradcheckInstance in;
    const auto& g = in.grid;
    const auto n = g.cells();
    in.lambda_r = rng.uniform(0.8, 5.0);
    for (auto* v : {&in.heat_t, &in.heat_t1}) {
        v->resize(n);
        for (auto& x : *v) x = rng.uniform(0.05, 1.0);
    }
    for (auto* v : {&in.fdx, &in.fdy, &in.bdx, &in.bdy}) v->resize(n);
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const auto i = g.index(x, y);
            // forward targets stay strictly inside the grid, away from cell lines
            const double tx = detail::off_lattice(std::clamp(x + rng.uniform(-2.0, 2.0), 0.05, g.width() - 1.05));
            const double ty = detail::off_lattice(std::clamp(y + rng.uniform(-2.0, 2.0), 0.05, g.height() - 1.05));
            in.fdx[i] = tx - x;
            in.fdy[i] = ty - y;
            in.bdx[i] = rng.uniform(-2.0, 2.0);
            in.bdy[i] = rng.uniform(-2.0, 2.0);
        }
    for (auto* pts : {&in.points_t, &in.points_t1})
        for (int k = 0; k < 2; ++k) pts->push_back({rng.uniform(1.5, 5.5), rng.uniform(1.5, 5.5)});
    return in;
}

struct GradcheckReport {
    double mot = 0.0, fb = 0.0, se = 0.0, total = 0.0;  // worst relative error over instances
    int instances = 0;
};

/// Differentiates each term with respect to the forward field (dx then dy
/// stacked) and compares with central differences. The default step is
/// smaller than finite_diff_check's because at lambda_r = 5 the O(eps^2)
/// truncation error of a 1e-4 step alone approaches 1e-4.
inline GradcheckReport run_gradcheck(int instances, std::uint64_t seed, double eps = 1e-5) {
    GradcheckReport rep;
    rep.instances = instances;
    for (int k = 0; k < instances; ++k) {
        const auto in = random_gradcheck_instance(seed, k);
        const auto& g = in.grid;
        const auto n = g.cells();
        const ReconstructionConfig cfg{in.lambda_r, 59};
        const auto target_t = smooth_target(g, in.heat_t, cfg, 1).values;
        const auto target_t1 = smooth_target(g, in.heat_t1, cfg, 1).values;

        std::vector<double> point(2 * n);
        std::copy(in.fdx.begin(), in.fdx.end(), point.begin());
        std::copy(in.fdy.begin(), in.fdy.end(), point.begin() + n);

        auto check = [&](const LossWeights& w) {
            auto eval = [&](std::span<const double> p, PairGradients* grads) {
                const PairView view{.grid = g,
                                    .heatmap_t = in.heat_t,
                                    .heatmap_t1 = in.heat_t1,
                                    .target_t = target_t,
                                    .target_t1 = target_t1,
                                    .points_t = in.points_t,
                                    .points_t1 = in.points_t1,
                                    .fwd_dx = p.subspan(0, n),
                                    .fwd_dy = p.subspan(n, n),
                                    .bwd_dx = in.bdx,
                                    .bwd_dy = in.bdy};
                return loss_total(view, cfg, w, grads, 1).total;
            };
            PairGradients grads;
            eval(point, &grads);
            std::vector<double> analytic(2 * n);
            std::copy(grads.fwd.dx.begin(), grads.fwd.dx.end(), analytic.begin());
            std::copy(grads.fwd.dy.begin(), grads.fwd.dy.end(), analytic.begin() + n);
            return finite_diff_check([&](std::span<const double> p) { return eval(p, nullptr); }, analytic, point, eps);
        };
        // each term isolated through the weights, then the default mix
        rep.mot = std::max(rep.mot, check(LossWeights{0.0, 0.0, true}));
        rep.fb = std::max(rep.fb, check(LossWeights{1.0, 0.0, false}));
        rep.se = std::max(rep.se, check(LossWeights{0.0, 1.0, false}));
        rep.total = std::max(rep.total, check(LossWeights{}));
    }
    return rep;
}

}  // namespace groundflow
