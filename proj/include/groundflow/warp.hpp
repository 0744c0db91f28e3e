#pragma once

// Differentiable reconstruction of a heatmap from motion offsets:
//
//   xhat_j = sum_i x_i * W(|| j - (i + delta_i) ||),   W(l) = 1 / (1 + exp(4 lambda l - 10))
//
// The production path restricts the sum to source cells inside a square
// window centred on the output cell and skips cells whose heatmap value is
// exactly zero (they contribute +0.0, so the result is bit-identical to the
// full windowed sum). Per-cell accumulation always runs row-major over the
// window, so results do not depend on the worker count.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "groundflow/core.hpp"
#include "groundflow/parallel.hpp"

namespace groundflow {

struct ReconstructionConfig {
    double lambda_r = 0.8;
    int window_cells = 59;

    void validate() const {
        if (!(lambda_r > 0.0)) throw ConfigError("lambda_r must be positive");
        if (window_cells < 3 || window_cells % 2 == 0)
            throw ConfigError("window_cells must be odd and >= 3");
    }
    int half_window() const { return (window_cells - 1) / 2; }
    /// Largest offset component the window can represent.
    double max_motion() const { return 0.5 * (window_cells - 1); }
};

inline double weight(double l, double lambda_r) {
    double e = 4.0 * lambda_r * l - 10.0;
    e = std::clamp(e, -60.0, 60.0);
    return 1.0 / (1.0 + std::exp(e));
}

/// dW/dl = -4 lambda W (1 - W).
inline double weight_derivative(double l, double lambda_r) {
    const double w = weight(l, lambda_r);
    return -4.0 * lambda_r * w * (1.0 - w);
}

struct WarpGradients {
    ScalarField d_heatmap;
    ScalarField d_dx;
    ScalarField d_dy;
};

struct WarpDiagnostics {
    double max_offset_norm = 0.0;
    bool exceeds_window = false;
};

namespace detail {

inline void check_warp_inputs(const GroundGrid& g, std::span<const double> x, std::span<const double> dx,
                              std::span<const double> dy) {
    if (x.size() != g.cells() || dx.size() != g.cells() || dy.size() != g.cells())
        throw DimensionError("reconstruct: heatmap and offset field must share one grid");
}

/// Nonzero source cells bucketed by row, x ascending.
struct SparseRows {
    std::vector<std::vector<int>> xs;

    SparseRows(const GroundGrid& g, std::span<const double> x) : xs(g.height()) {
        for (int y = 0; y < g.height(); ++y)
            for (int cx = 0; cx < g.width(); ++cx)
                if (x[g.index(cx, y)] != 0.0) xs[y].push_back(cx);
    }
};

}  // namespace detail

/// Global sum over every source cell; O((w h)^2). Test oracle.
inline ScalarField reconstruct_dense(const GroundGrid& g, std::span<const double> x, std::span<const double> dx,
                                     std::span<const double> dy, double lambda_r) {
    detail::check_warp_inputs(g, x, dx, dy);
    ScalarField out(g);
    for (int jy = 0; jy < g.height(); ++jy)
        for (int jx = 0; jx < g.width(); ++jx) {
            double acc = 0.0;
            for (int iy = 0; iy < g.height(); ++iy)
                for (int ix = 0; ix < g.width(); ++ix) {
                    const auto i = g.index(ix, iy);
                    const double ex = jx - ix - dx[i];
                    const double ey = jy - iy - dy[i];
                    acc += x[i] * weight(std::sqrt(ex * ex + ey * ey), lambda_r);
                }
            out.at(jx, jy) = acc;
        }
    return out;
}

inline ScalarField reconstruct_dense(const ScalarField& x, const OffsetField& delta, double lambda_r) {
    require_same_grid(x.grid, delta.grid(), "reconstruct_dense");
    return reconstruct_dense(x.grid, x.values, delta.dx(), delta.dy(), lambda_r);
}

inline WarpDiagnostics offset_diagnostics(std::span<const double> dx, std::span<const double> dy,
                                          const ReconstructionConfig& cfg) {
    WarpDiagnostics d;
    for (std::size_t i = 0; i < dx.size(); ++i) d.max_offset_norm = std::max(d.max_offset_norm, std::hypot(dx[i], dy[i]));
    d.exceeds_window = d.max_offset_norm > cfg.max_motion();
    return d;
}

/// Sliding-window reconstruction. `workers` = 0 uses the default pool size.
inline ScalarField reconstruct(const GroundGrid& g, std::span<const double> x, std::span<const double> dx,
                               std::span<const double> dy, const ReconstructionConfig& cfg,
                               WarpDiagnostics* diagnostics = nullptr, unsigned workers = 0) {
    cfg.validate();
    detail::check_warp_inputs(g, x, dx, dy);
    if (diagnostics) *diagnostics = offset_diagnostics(dx, dy, cfg);

    const detail::SparseRows rows(g, x);
    const int half = cfg.half_window();
    const double lambda = cfg.lambda_r;
    ScalarField out(g);

    parallel_for(
        static_cast<std::size_t>(g.height()),
        [&](std::size_t row) {
            const int jy = static_cast<int>(row);
            const int y0 = std::max(0, jy - half), y1 = std::min(g.height() - 1, jy + half);
            for (int jx = 0; jx < g.width(); ++jx) {
                double acc = 0.0;
                for (int iy = y0; iy <= y1; ++iy) {
                    const auto& xs = rows.xs[iy];
                    auto it = std::lower_bound(xs.begin(), xs.end(), jx - half);
                    for (; it != xs.end() && *it <= jx + half; ++it) {
                        const auto i = g.index(*it, iy);
                        const double ex = jx - *it - dx[i];
                        const double ey = jy - iy - dy[i];
                        acc += x[i] * weight(std::sqrt(ex * ex + ey * ey), lambda);
                    }
                }
                out.values[g.index(jx, jy)] = acc;
            }
        },
        workers);
    return out;
}

inline ScalarField reconstruct(const ScalarField& x, const OffsetField& delta, const ReconstructionConfig& cfg,
                               WarpDiagnostics* diagnostics = nullptr, unsigned workers = 0) {
    require_same_grid(x.grid, delta.grid(), "reconstruct");
    return reconstruct(x.grid, x.values, delta.dx(), delta.dy(), cfg, diagnostics, workers);
}

inline ScalarField reconstruct(const Heatmap& x, const OffsetField& delta, const ReconstructionConfig& cfg,
                               WarpDiagnostics* diagnostics = nullptr, unsigned workers = 0) {
    require_same_grid(x.grid(), delta.grid(), "reconstruct");
    return reconstruct(x.grid(), x.values(), delta.dx(), delta.dy(), cfg, diagnostics, workers);
}

/// Vector-Jacobian product of `reconstruct` for an upstream gradient dL/dxhat.
///
///   dL/dx_i     = sum_j up_j W(l_ij)
///   dL/ddelta_i = sum_j up_j x_i W'(l_ij) * -(j - i - delta_i) / l_ij
///
/// with the direction set to zero when l_ij < 1e-8. When `heatmap_grad` is
/// false only the offset gradient is formed, which touches nonzero sources
/// only.
inline WarpGradients reconstruct_backward(const GroundGrid& g, std::span<const double> x,
                                          std::span<const double> dx, std::span<const double> dy,
                                          const ReconstructionConfig& cfg, std::span<const double> upstream,
                                          bool heatmap_grad = true, unsigned workers = 0) {
    cfg.validate();
    detail::check_warp_inputs(g, x, dx, dy);
    if (upstream.size() != g.cells()) throw DimensionError("reconstruct_backward: upstream size mismatch");

    const int half = cfg.half_window();
    const double lambda = cfg.lambda_r;
    WarpGradients grads{ScalarField(g), ScalarField(g), ScalarField(g)};

    parallel_for(
        static_cast<std::size_t>(g.height()),
        [&](std::size_t row) {
            const int iy = static_cast<int>(row);
            const int y0 = std::max(0, iy - half), y1 = std::min(g.height() - 1, iy + half);
            for (int ix = 0; ix < g.width(); ++ix) {
                const auto i = g.index(ix, iy);
                const double xi = x[i];
                if (!heatmap_grad && xi == 0.0) continue;
                const int x0 = std::max(0, ix - half), x1 = std::min(g.width() - 1, ix + half);
                double acc_h = 0.0, acc_dx = 0.0, acc_dy = 0.0;
                for (int jy = y0; jy <= y1; ++jy)
                    for (int jx = x0; jx <= x1; ++jx) {
                        const double up = upstream[g.index(jx, jy)];
                        if (up == 0.0) continue;
                        const double ex = jx - ix - dx[i];
                        const double ey = jy - iy - dy[i];
                        const double l = std::sqrt(ex * ex + ey * ey);
                        const double w = weight(l, lambda);
                        acc_h += up * w;
                        if (xi != 0.0 && l >= 1e-8) {
                            const double dw = -4.0 * lambda * w * (1.0 - w);
                            const double s = up * xi * dw / l;
                            acc_dx -= s * ex;
                            acc_dy -= s * ey;
                        }
                    }
                if (heatmap_grad) grads.d_heatmap.values[i] = acc_h;
                grads.d_dx.values[i] = acc_dx;
                grads.d_dy.values[i] = acc_dy;
            }
        },
        workers);
    return grads;
}

inline WarpGradients reconstruct_backward(const ScalarField& x, const OffsetField& delta,
                                          const ReconstructionConfig& cfg, const ScalarField& upstream,
                                          bool heatmap_grad = true, unsigned workers = 0) {
    require_same_grid(x.grid, delta.grid(), "reconstruct_backward");
    require_same_grid(x.grid, upstream.grid, "reconstruct_backward");
    return reconstruct_backward(x.grid, x.values, delta.dx(), delta.dy(), cfg, upstream.values, heatmap_grad,
                                workers);
}

}  // namespace groundflow
