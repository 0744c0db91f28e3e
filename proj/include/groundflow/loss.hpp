#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "groundflow/core.hpp"
#include "groundflow/warp.hpp"

namespace groundflow {

struct LossWeights {
    double lambda_fb = 0.05;
    double lambda_se = 1.0;
    bool use_mot = true;  // ablation switch for the reconstruction term

    void validate() const {
        if (!(lambda_fb >= 0.0) || !(lambda_se >= 0.0)) throw ConfigError("loss weights must be >= 0");
    }
};

/// Annealing of the reconstruction sharpness: stepped once per epoch.
struct LambdaSchedule {
    double init = 0.8;
    double increment = 0.08;
    double cap = 5.0;
    double current = 0.8;

    static LambdaSchedule standard() { return {}; }
    void validate() const {
        if (!(init > 0.0) || !(cap >= init) || increment < 0.0) throw ConfigError("invalid lambda schedule");
    }
};

inline LambdaSchedule schedule_step(LambdaSchedule s) {
    s.current = std::min(s.current + s.increment, s.cap);
    return s;
}

/// Offset-field gradient (dL/ddx, dL/ddy).
struct OffsetGradient {
    std::vector<double> dx;
    std::vector<double> dy;

    OffsetGradient() = default;
    explicit OffsetGradient(std::size_t n) : dx(n, 0.0), dy(n, 0.0) {}
};

// --- detection term -------------------------------------------------------

inline double sum_squared_diff(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("loss: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double loss_det(const Heatmap& x, const Heatmap& x_gt) {
    require_same_grid(x.grid(), x_gt.grid(), "loss_det");
    return sum_squared_diff(x.values(), x_gt.values());
}

// --- motion term ----------------------------------------------------------

/// Target of the motion term: the ground truth pushed through the
/// reconstruction with zero offsets so both sides share the same blur.
inline ScalarField smooth_target(const GroundGrid& g, std::span<const double> gt, const ReconstructionConfig& cfg,
                                 unsigned workers = 0) {
    const std::vector<double> zero(g.cells(), 0.0);
    return reconstruct(g, gt, zero, zero, cfg, nullptr, workers);
}

inline ScalarField smooth_target(const Heatmap& gt, const ReconstructionConfig& cfg, unsigned workers = 0) {
    return smooth_target(gt.grid(), gt.values(), cfg, workers);
}

/// sum (xhat - target)^2 where target is already smoothed.
inline double loss_mot_smoothed(const ScalarField& x_hat, const ScalarField& target) {
    require_same_grid(x_hat.grid, target.grid, "loss_mot");
    return sum_squared_diff(x_hat.values, target.values);
}

inline double loss_mot(const ScalarField& x_hat, const Heatmap& x_gt, const ReconstructionConfig& cfg) {
    require_same_grid(x_hat.grid, x_gt.grid(), "loss_mot");
    return loss_mot_smoothed(x_hat, smooth_target(x_gt, cfg));
}

// --- forward/backward consistency ----------------------------------------

/// sum_i || fwd(i) + bwd(i + fwd(i)) ||^2 with bilinear, border-clamped
/// sampling of the backward field. Gradients are accumulated into the
/// optional outputs.
inline double loss_fb(const GroundGrid& g, std::span<const double> fdx, std::span<const double> fdy,
                      std::span<const double> bdx, std::span<const double> bdy, OffsetGradient* grad_fwd = nullptr,
                      OffsetGradient* grad_bwd = nullptr) {
    const auto n = g.cells();
    if (fdx.size() != n || fdy.size() != n || bdx.size() != n || bdy.size() != n)
        throw DimensionError("loss_fb: grid mismatch");
    double total = 0.0;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            const auto i = g.index(x, y);
            const Vec2 p{x + fdx[i], y + fdy[i]};
            const auto s = bilinear_stencil(g, p);
            const double rx = fdx[i] + bilinear_sample(g, bdx, s);
            const double ry = fdy[i] + bilinear_sample(g, bdy, s);
            total += rx * rx + ry * ry;
            if (!grad_fwd && !grad_bwd) continue;

            const auto i00 = g.index(s.x0, s.y0), i10 = g.index(s.x1, s.y0);
            const auto i01 = g.index(s.x0, s.y1), i11 = g.index(s.x1, s.y1);
            if (grad_fwd) {
                // d(sample)/dp along each axis; zero when the axis is clamped
                auto ddx = [&](std::span<const double> v) {
                    if (s.clamped_x || s.x0 == s.x1) return 0.0;
                    return (1 - s.fy) * (v[i10] - v[i00]) + s.fy * (v[i11] - v[i01]);
                };
                auto ddy = [&](std::span<const double> v) {
                    if (s.clamped_y || s.y0 == s.y1) return 0.0;
                    return (1 - s.fx) * (v[i01] - v[i00]) + s.fx * (v[i11] - v[i10]);
                };
                grad_fwd->dx[i] += 2.0 * rx * (1.0 + ddx(bdx)) + 2.0 * ry * ddx(bdy);
                grad_fwd->dy[i] += 2.0 * rx * ddy(bdx) + 2.0 * ry * (1.0 + ddy(bdy));
            }
            if (grad_bwd) {
                const double w00 = (1 - s.fx) * (1 - s.fy), w10 = s.fx * (1 - s.fy);
                const double w01 = (1 - s.fx) * s.fy, w11 = s.fx * s.fy;
                grad_bwd->dx[i00] += 2.0 * rx * w00;
                grad_bwd->dx[i10] += 2.0 * rx * w10;
                grad_bwd->dx[i01] += 2.0 * rx * w01;
                grad_bwd->dx[i11] += 2.0 * rx * w11;
                grad_bwd->dy[i00] += 2.0 * ry * w00;
                grad_bwd->dy[i10] += 2.0 * ry * w10;
                grad_bwd->dy[i01] += 2.0 * ry * w01;
                grad_bwd->dy[i11] += 2.0 * ry * w11;
            }
        }
    return total;
}

inline double loss_fb(const OffsetField& fwd, const OffsetField& bwd) {
    require_same_grid(fwd.grid(), bwd.grid(), "loss_fb");
    return loss_fb(fwd.grid(), fwd.dx(), fwd.dy(), bwd.dx(), bwd.dy());
}

// --- spatial extent -------------------------------------------------------

/// Cells whose centre lies within `radius` of p.
inline std::vector<std::size_t> neighborhood(const GroundGrid& g, Vec2 p, double radius) {
    std::vector<std::size_t> cells;
    const int x0 = std::max(0, static_cast<int>(std::ceil(p.x - radius)));
    const int x1 = std::min(g.width() - 1, static_cast<int>(std::floor(p.x + radius)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(p.y - radius)));
    const int y1 = std::min(g.height() - 1, static_cast<int>(std::floor(p.y + radius)));
    const double r2 = radius * radius;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double ex = x - p.x, ey = y - p.y;
            if (ex * ex + ey * ey <= r2) cells.push_back(g.index(x, y));
        }
    return cells;
}

/// (1/N) sum_p sqrt(var(dx) + var(dy)) over each point's neighbourhood,
/// population variances. The gradient of a zero-spread neighbourhood is
/// taken as zero.
inline double loss_se(const GroundGrid& g, std::span<const double> dx, std::span<const double> dy,
                      std::span<const Vec2> points, double radius, OffsetGradient* grad = nullptr) {
    if (dx.size() != g.cells() || dy.size() != g.cells()) throw DimensionError("loss_se: grid mismatch");
    if (!(radius > 0.0)) throw ConfigError("loss_se: radius must be positive");
    if (points.empty()) return 0.0;
    const double inv_n_points = 1.0 / static_cast<double>(points.size());
    double total = 0.0;
    for (const Vec2& p : points) {
        const auto cells = neighborhood(g, p, radius);
        if (cells.empty()) continue;
        const double n = static_cast<double>(cells.size());
        double mx = 0.0, my = 0.0;
        for (auto c : cells) {
            mx += dx[c];
            my += dy[c];
        }
        mx /= n;
        my /= n;
        double var = 0.0;
        for (auto c : cells) {
            const double ex = dx[c] - mx, ey = dy[c] - my;
            var += ex * ex + ey * ey;
        }
        var /= n;
        const double sd = std::sqrt(var);
        total += sd;
        if (grad && sd > 1e-12) {
            // d sd / d dx_c = (dx_c - mean) / (n sd); the mean term cancels.
            const double scale = inv_n_points / (n * sd);
            for (auto c : cells) {
                grad->dx[c] += scale * (dx[c] - mx);
                grad->dy[c] += scale * (dy[c] - my);
            }
        }
    }
    return total * inv_n_points;
}

inline double loss_se(const OffsetField& delta, std::span<const Vec2> points, double radius) {
    return loss_se(delta.grid(), delta.dx(), delta.dy(), points, radius);
}

// --- composite loss for one frame pair ------------------------------------

struct LossTerms {
    double l_mot = 0.0;
    double l_det = 0.0;
    double l_fb = 0.0;
    double l_se = 0.0;
    double total = 0.0;
};

/// One frame pair (t, t+1). `heatmap_*` feed the reconstruction; the
/// `target_*` maps must already be smoothed (see smooth_target). `gt_*`
/// are only read when the heatmaps are optimisation variables.
struct PairView {
    GroundGrid grid;
    std::span<const double> heatmap_t{}, heatmap_t1{};
    std::span<const double> target_t{}, target_t1{};
    std::span<const double> gt_t{}, gt_t1{};
    std::span<const Vec2> points_t{}, points_t1{};
    std::span<const double> fwd_dx{}, fwd_dy{}, bwd_dx{}, bwd_dy{};
    double se_radius = 3.0;
    bool heatmaps_are_variables = false;
};

struct PairGradients {
    OffsetGradient fwd;
    OffsetGradient bwd;
    std::vector<double> d_heatmap_t, d_heatmap_t1;  // empty unless heatmaps are variables
};

/// L = L_mot + L_det + lambda_fb L_fb + lambda_se L_se for one pair, where
/// L_mot covers the forward pair and the reversed pair (backward field),
/// L_se regularises both fields around their source points, and L_det is
/// only present when the heatmaps are free variables.
inline LossTerms loss_total(const PairView& in, const ReconstructionConfig& cfg, const LossWeights& weights,
                            PairGradients* grads = nullptr, unsigned workers = 1) {
    weights.validate();
    const auto& g = in.grid;
    const auto n = g.cells();
    LossTerms terms;
    const bool want_grad = grads != nullptr;
    if (want_grad) {
        grads->fwd = OffsetGradient(n);
        grads->bwd = OffsetGradient(n);
        grads->d_heatmap_t.assign(in.heatmaps_are_variables ? n : 0, 0.0);
        grads->d_heatmap_t1.assign(in.heatmaps_are_variables ? n : 0, 0.0);
    }

    if (weights.use_mot) {
        auto direction = [&](std::span<const double> src, std::span<const double> target, std::span<const double> dx,
                             std::span<const double> dy, OffsetGradient* og, std::vector<double>* dh) {
            const ScalarField x_hat = reconstruct(g, src, dx, dy, cfg, nullptr, workers);
            if (target.size() != n) throw DimensionError("loss_total: target size mismatch");
            std::vector<double> up(n);
            double l = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = x_hat.values[i] - target[i];
                l += d * d;
                up[i] = 2.0 * d;
            }
            if (og) {
                const bool need_h = dh && !dh->empty();
                const auto wg = reconstruct_backward(g, src, dx, dy, cfg, up, need_h, workers);
                for (std::size_t i = 0; i < n; ++i) {
                    og->dx[i] += wg.d_dx.values[i];
                    og->dy[i] += wg.d_dy.values[i];
                }
                if (need_h)
                    for (std::size_t i = 0; i < n; ++i) (*dh)[i] += wg.d_heatmap.values[i];
            }
            return l;
        };
        terms.l_mot = direction(in.heatmap_t, in.target_t1, in.fwd_dx, in.fwd_dy, want_grad ? &grads->fwd : nullptr,
                                want_grad ? &grads->d_heatmap_t : nullptr) +
                      direction(in.heatmap_t1, in.target_t, in.bwd_dx, in.bwd_dy, want_grad ? &grads->bwd : nullptr,
                                want_grad ? &grads->d_heatmap_t1 : nullptr);
    }

    if (in.heatmaps_are_variables) {
        terms.l_det = sum_squared_diff(in.heatmap_t, in.gt_t) + sum_squared_diff(in.heatmap_t1, in.gt_t1);
        if (want_grad)
            for (std::size_t i = 0; i < n; ++i) {
                grads->d_heatmap_t[i] += 2.0 * (in.heatmap_t[i] - in.gt_t[i]);
                grads->d_heatmap_t1[i] += 2.0 * (in.heatmap_t1[i] - in.gt_t1[i]);
            }
    }

    {
        const bool g_fb = want_grad && weights.lambda_fb > 0.0;
        OffsetGradient gf(g_fb ? n : 0), gb(g_fb ? n : 0);
        terms.l_fb = loss_fb(g, in.fwd_dx, in.fwd_dy, in.bwd_dx, in.bwd_dy, g_fb ? &gf : nullptr,
                             g_fb ? &gb : nullptr);
        if (g_fb)
            for (std::size_t i = 0; i < n; ++i) {
                grads->fwd.dx[i] += weights.lambda_fb * gf.dx[i];
                grads->fwd.dy[i] += weights.lambda_fb * gf.dy[i];
                grads->bwd.dx[i] += weights.lambda_fb * gb.dx[i];
                grads->bwd.dy[i] += weights.lambda_fb * gb.dy[i];
            }
    }

    {
        const bool g_se = want_grad && weights.lambda_se > 0.0;
        OffsetGradient gf(g_se ? n : 0), gb(g_se ? n : 0);
        terms.l_se = loss_se(g, in.fwd_dx, in.fwd_dy, in.points_t, in.se_radius, g_se ? &gf : nullptr) +
                     loss_se(g, in.bwd_dx, in.bwd_dy, in.points_t1, in.se_radius, g_se ? &gb : nullptr);
        if (g_se)
            for (std::size_t i = 0; i < n; ++i) {
                grads->fwd.dx[i] += weights.lambda_se * gf.dx[i];
                grads->fwd.dy[i] += weights.lambda_se * gf.dy[i];
                grads->bwd.dx[i] += weights.lambda_se * gb.dx[i];
                grads->bwd.dy[i] += weights.lambda_se * gb.dy[i];
            }
    }

    terms.total = terms.l_mot + terms.l_det + weights.lambda_fb * terms.l_fb + weights.lambda_se * terms.l_se;
    return terms;
}

}  // namespace groundflow
